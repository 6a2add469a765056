#include <benchmark/benchmark.h>

#include "generators.hpp"
#include "wikibridge/query.hpp"
#include "wikibridge/semantics.hpp"

using namespace wikibridge;

namespace {

QuadStore wikiStore() {
  QuadStore store;
  for (std::size_t i = 0; i < 1000; ++i) {
    auto p = gen::generatedWikiPage(i);
    auto lowered = lowerPage(*parsePage(p).page, 1, "a", "t");
    for (const auto& q : scopeBlankNodes(lowered.quads, blankScope(p.ns, p.title))) {
      store.insert(q);
    }
  }
  return store;
}

void runQuery(benchmark::State& state, const char* text) {
  static const QuadStore store = wikiStore();
  auto q = *parseQuery(text).query;
  std::size_t rows = 0;
  for (auto _ : state) rows = evaluate(q, store, false).rows.size();
  state.counters["rows"] = static_cast<double>(rows);
}

}  // namespace

static void BM_OnePattern(benchmark::State& state) {
  runQuery(state, "SELECT ?b WHERE { ?b rdf:type wb:onto/Church }");
}
BENCHMARK(BM_OnePattern);

static void BM_ThreePatternJoin(benchmark::State& state) {
  runQuery(state,
           "SELECT ?b ?h WHERE { ?b rdf:type wb:onto/Church . ?b wb:onto/height ?h . "
           "?b wb:onto/locatedIn ?t }");
}
BENCHMARK(BM_ThreePatternJoin);

static void BM_FilterOrderLimit(benchmark::State& state) {
  runQuery(state,
           "SELECT ?b ?h WHERE { ?b wb:onto/height ?h FILTER(?h > 20 && ?h < 40) } "
           "ORDER BY DESC(?h) LIMIT 10");
}
BENCHMARK(BM_FilterOrderLimit);

static void BM_Parse(benchmark::State& state) {
  const char* text =
      "SELECT DISTINCT ?b ?h WHERE { ?b a wb:onto/Church . ?b wb:onto/height ?h "
      "FILTER(?h >= 10 || regex(?b, \"St\", \"i\")) } ORDER BY ?h LIMIT 5";
  for (auto _ : state) benchmark::DoNotOptimize(parseQuery(text));
}
BENCHMARK(BM_Parse);
