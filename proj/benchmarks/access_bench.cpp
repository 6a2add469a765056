#include <benchmark/benchmark.h>

#include "wikibridge/access.hpp"

using namespace wikibridge;

static void BM_AuthorizePresets(benchmark::State& state) {
  auto config = *loadAcl(defaultAclText() + "\nuser alice groups contributors\n"
                                            "deny group:contributors edit page:Main:Locked\n")
                     .config;
  auto alice = principalFor(config, "alice");
  auto page = Resource::page("Main", "Locked");
  for (auto _ : state) benchmark::DoNotOptimize(authorize(config, alice, Action::Edit, page));
}
BENCHMARK(BM_AuthorizePresets);

static void BM_AuthorizeManyRules(benchmark::State& state) {
  std::string text;
  for (int i = 0; i < state.range(0); ++i) {
    text += "allow group:g" + std::to_string(i % 10) + " read page:Main:P" + std::to_string(i) + "\n";
  }
  auto config = *loadAcl(text).config;
  Principal p{"u", {"g3", "g7"}};
  auto page = Resource::page("Main", "P33");
  for (auto _ : state) benchmark::DoNotOptimize(authorize(config, p, Action::Read, page));
}
BENCHMARK(BM_AuthorizeManyRules)->Arg(10)->Arg(1000);
BENCHMARK_MAIN();
