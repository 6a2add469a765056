#pragma once

// Seeded random instances for property tests, the acceptance runner and the
// benchmarks.

#include <cstddef>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wikibridge/markup.hpp"
#include "wikibridge/store.hpp"

namespace gen {

using Rng = std::mt19937_64;

// Page text in canonical form together with the trees it must parse to. The
// text is written by this generator, not by the library serializer.
struct CanonicalPage {
  wikibridge::PageSource source;
  std::vector<wikibridge::AnnotationNode> trees;
};

struct TreeOptions {
  int maxDepth = wikibridge::kMaxNestingDepth;
  std::size_t maxPairs = 4;
  double nestProbability = 0.3;
};

wikibridge::AnnotationNode randomTree(Rng& rng, const TreeOptions& options = {});
std::string canonicalText(const wikibridge::AnnotationNode& node);
CanonicalPage randomCanonicalPage(Rng& rng, std::string title, std::size_t maxBlocks = 5);

// Arbitrary bytes, half of them mutations of canonical pages.
std::string fuzzInput(Rng& rng);

// Classes C0..C(n-1) with random subclass edges (cycles allowed, no self
// loops) rendered as ontology DSL.
struct RandomOntology {
  std::set<std::string> classes;
  std::set<std::pair<std::string, std::string>> edges;
  std::string text;
};
RandomOntology randomOntology(Rng& rng, std::size_t maxClasses = 10, std::size_t maxEdges = 20);

// Up to `maxQuads` quads over a few revision graphs, mostly rdf:type
// statements over the ontology's classes (plus an undeclared one).
std::vector<wikibridge::Quad> randomInstances(Rng& rng, const RandomOntology& ontology,
                                              std::size_t maxQuads = 50);

// Store over small term pools so that brute-force enumeration stays cheap:
// revision, inferred and meta graphs, IRIs, blanks and literals of every
// datatype.
std::vector<wikibridge::Quad> randomQueryStore(Rng& rng, std::size_t maxQuads = 100);

// SPARQL text over the same pools: <= 4 patterns, <= 2 filters, optional
// DISTINCT, ORDER BY, LIMIT and OFFSET.
std::string randomQueryText(Rng& rng);

// Deterministic heritage-style page i of a generated wiki, about 20 quads.
wikibridge::PageSource generatedWikiPage(std::size_t i);

}  // namespace gen
