#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "wikibridge/store.hpp"
#include "wikibridge/vocabulary.hpp"

using namespace wikibridge;

namespace {

Term iri(const std::string& local) { return Term::iri("http://example.org/" + local); }

Quad randomQuad(std::mt19937_64& rng, int pool) {
  auto pickN = [&](int n) { return std::to_string(std::uniform_int_distribution<int>(0, n - 1)(rng)); };
  Term s = rng() % 5 == 0 ? Term::blank("b" + pickN(pool)) : iri("s" + pickN(pool));
  Term o;
  switch (rng() % 4) {
    case 0: o = iri("s" + pickN(pool)); break;
    case 1: o = Term::literal(pickN(pool * 3), Datatype::Integer); break;
    case 2: o = Term::literal("v " + pickN(pool) + " \"q\"\n\\ é"); break;
    default: o = Term::blank("b" + pickN(pool)); break;
  }
  return {s, iri("p" + pickN(pool / 2 + 1)), o, iri("g" + pickN(4))};
}

std::vector<Quad> linearScan(const std::vector<Quad>& all, const QuadPattern& pat) {
  std::vector<Quad> out;
  for (const auto& q : all) {
    if ((!pat.s || *pat.s == q.s) && (!pat.p || *pat.p == q.p) && (!pat.o || *pat.o == q.o) &&
        (!pat.g || *pat.g == q.g)) {
      out.push_back(q);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Quad> sorted(std::vector<Quad> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST(Store, InsertSetSemantics) {
  QuadStore store;
  Quad q{iri("a"), iri("p"), Term::literal("x"), iri("g")};
  EXPECT_TRUE(store.insert(q));
  EXPECT_FALSE(store.insert(q));
  EXPECT_EQ(store.size(), 1u);
  Quad other = q;
  other.g = iri("g2");
  EXPECT_TRUE(store.insert(other));
  EXPECT_EQ(store.size(), 2u);
}

TEST(Store, RejectsInvalidQuads) {
  QuadStore store;
  EXPECT_THROW(store.insert({Term::literal("x"), iri("p"), iri("o"), iri("g")}),
               std::invalid_argument);
  EXPECT_THROW(store.insert({iri("s"), Term::blank("p"), iri("o"), iri("g")}),
               std::invalid_argument);
  EXPECT_THROW(store.insert({iri("s"), iri("p"), Term::literal("x", Datatype::Integer), iri("g")}),
               std::invalid_argument);
  EXPECT_THROW(store.insert({iri("s"), iri("p"), Term::iri("not an iri"), iri("g")}),
               std::invalid_argument);
  EXPECT_TRUE(store.empty());
}

TEST(Store, MatchTypeQuads) {
  QuadStore store;
  Term type = Term::iri(std::string(vocab::kRdfType));
  std::vector<Quad> quads = {
      {iri("a"), type, iri("C"), iri("g")},
      {iri("b"), type, iri("D"), iri("g")},
      {iri("a"), iri("p"), Term::literal("1", Datatype::Integer), iri("g")},
      {iri("a"), iri("q"), iri("b"), iri("g")},
      {iri("b"), iri("p"), Term::literal("x"), iri("h")},
  };
  for (const auto& q : quads) store.insert(q);
  QuadPattern pat;
  pat.p = type;
  EXPECT_EQ(sorted(store.match(pat)), linearScan(quads, pat));
  EXPECT_EQ(store.match(pat).size(), 2u);
  EXPECT_EQ(store.match({}).size(), 5u);
  QuadPattern absent{iri("a"), type, iri("D"), iri("g")};
  EXPECT_TRUE(store.match(absent).empty());
}

TEST(Store, RemoveAndDropGraph) {
  QuadStore store;
  for (int i = 0; i < 4; ++i) store.insert({iri("s" + std::to_string(i)), iri("p"), iri("o"), iri("g1")});
  store.insert({iri("s"), iri("p"), iri("o"), iri("g2")});
  EXPECT_EQ(store.dropGraph(iri("g1")), 4u);
  EXPECT_EQ(store.size(), 1u);
  EXPECT_EQ(store.dropGraph(iri("absent")), 0u);
  Quad q{iri("s"), iri("p"), iri("o"), iri("g2")};
  EXPECT_TRUE(store.remove(q));
  EXPECT_FALSE(store.remove(q));
  EXPECT_TRUE(store.empty());
}

TEST(Store, IndexCoherence) {
  std::mt19937_64 rng(17);
  QuadStore store;
  std::vector<Quad> all;
  for (int i = 0; i < 5000; ++i) {
    Quad q = randomQuad(rng, 30);
    if (store.insert(q)) all.push_back(q);
  }
  ASSERT_EQ(store.size(), all.size());
  for (int shape = 0; shape < 16; ++shape) {
    for (int trial = 0; trial < 10; ++trial) {
      const Quad& seed = all[rng() % all.size()];
      Quad other = randomQuad(rng, 30);  // usually absent
      const Quad& src = trial % 3 == 0 ? other : seed;
      QuadPattern pat;
      if (shape & 1) pat.s = src.s;
      if (shape & 2) pat.p = src.p;
      if (shape & 4) pat.o = src.o;
      if (shape & 8) pat.g = src.g;
      ASSERT_EQ(sorted(store.match(pat)), linearScan(all, pat)) << "shape " << shape;
    }
  }
}

TEST(Store, InsertRemoveInverse) {
  std::mt19937_64 rng(23);
  QuadStore store;
  for (int i = 0; i < 300; ++i) store.insert(randomQuad(rng, 10));
  std::string before = store.exportNQuads();
  Quad fresh{iri("fresh"), iri("p"), iri("o"), iri("g0")};
  ASSERT_TRUE(store.insert(fresh));
  ASSERT_TRUE(store.remove(fresh));
  EXPECT_EQ(store.exportNQuads(), before);
}

TEST(Store, GraphIsolation) {
  std::mt19937_64 rng(29);
  QuadStore store;
  for (int i = 0; i < 500; ++i) store.insert(randomQuad(rng, 10));
  QuadPattern g1;
  g1.g = iri("g1");
  auto untouched = sorted(store.match(g1));
  store.dropGraph(iri("g0"));
  for (int i = 0; i < 50; ++i) {
    Quad q = randomQuad(rng, 10);
    q.g = iri("g0");
    store.insert(q);
  }
  EXPECT_EQ(sorted(store.match(g1)), untouched);
}

TEST(Store, NQuadsRoundTrip) {
  QuadStore empty;
  EXPECT_EQ(empty.exportNQuads(), "");

  std::mt19937_64 rng(31);
  QuadStore store;
  std::vector<Quad> all;
  while (store.size() < 100) {
    Quad q = randomQuad(rng, 40);
    if (store.insert(q)) all.push_back(q);
  }
  std::string text = store.exportNQuads();
  QuadStore back;
  ASSERT_FALSE(back.importNQuads(text).has_value());
  EXPECT_EQ(sorted(back.match({})), sorted(all));
  EXPECT_EQ(back.exportNQuads(), text);
  auto lines = std::count(text.begin(), text.end(), '\n');
  EXPECT_EQ(lines, 100);
}

TEST(Store, NQuadsErrors) {
  QuadStore store;
  auto err = store.importNQuads("malformed line");
  ASSERT_TRUE(err.has_value());
  EXPECT_EQ(err->line, 1u);
  err = store.importNQuads(
      "<http://a/s> <http://a/p> \"x\" <http://a/g> .\n"
      "<http://a/s> <http://a/p> <http://a/o> .\n");
  ASSERT_TRUE(err.has_value());
  EXPECT_EQ(err->line, 2u);
  EXPECT_TRUE(store.empty());  // all or nothing
  ASSERT_FALSE(store
                   .importNQuads("# comment\n\n<http://a/s> <http://a/p> \"x\" <http://a/g> .\n"
                                 "<http://a/s> <http://a/p> \"x\" <http://a/g> .\n")
                   .has_value());
  EXPECT_EQ(store.size(), 1u);
}

TEST(Store, CanonicalLineFormat) {
  Quad q{Term::blank("a1"), iri("p"), Term::literal("say \"hi\"\n", Datatype::String), iri("g")};
  EXPECT_EQ(toNQuadsLine(q),
            "_:a1 <http://example.org/p> \"say \\\"hi\\\"\\n\"^^<http://www.w3.org/2001/"
            "XMLSchema#string> <http://example.org/g> .");
  auto parsed = parseNQuads(toNQuadsLine(q) + "\n");
  ASSERT_FALSE(parsed.error);
  ASSERT_EQ(parsed.quads.size(), 1u);
  EXPECT_EQ(parsed.quads[0], q);
}

TEST(Store, ExportOrderedByGraphFirst) {
  QuadStore store;
  store.insert({iri("z"), iri("p"), iri("o"), iri("a")});
  store.insert({iri("a"), iri("p"), iri("o"), iri("b")});
  auto text = store.exportNQuads();
  EXPECT_LT(text.find("<http://example.org/z>"), text.find("<http://example.org/a> <"));
  EXPECT_EQ(store.graphs(), (std::vector<Term>{iri("a"), iri("b")}));
}
