#pragma once

// Reference implementations used to check the library. They favour the most
// literal reading of each definition over speed: enumeration, fixpoint
// iteration, matrix reachability.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wikibridge/access.hpp"
#include "wikibridge/markup.hpp"
#include "wikibridge/query.hpp"
#include "wikibridge/store.hpp"

namespace oracle {

using wikibridge::Quad;
using wikibridge::Term;

// Quads a top-level node lowers to, by direct recursion over the tree.
std::size_t quadCount(const wikibridge::AnnotationNode& node);
std::size_t quadCount(const wikibridge::ParsedPage& page);  // data quads, no meta

// Reflexive-transitive reachability by Floyd-Warshall over `classes`.
std::map<std::pair<std::string, std::string>, bool> reachability(
    const std::set<std::string>& classes, const std::set<std::pair<std::string, std::string>>& edges);

// rdf:type triples derivable by repeatedly applying
// (x type C), C subclassof D  =>  (x type D), minus the input triples.
std::set<Quad> closure(const std::vector<Quad>& quads,
                       const std::set<std::pair<std::string, std::string>>& edges);

// Every assignment of the query variables over the term universe of the
// scoped store, filtered by pattern membership and filters, then ordered,
// projected, deduplicated and sliced.
struct QueryAnswer {
  std::vector<std::string> vars;
  std::vector<wikibridge::Row> rows;
  std::size_t typeErrors = 0;
};
QueryAnswer evaluate(const wikibridge::Query& query, const std::vector<Quad>& store,
                     bool entailment);

// Decision by strata: the highest specificity with a matching rule decides,
// any deny in it denies; otherwise the default.
wikibridge::Effect decide(const wikibridge::AclConfig& config,
                          const wikibridge::Principal& principal, wikibridge::Action action,
                          const wikibridge::Resource& resource);

}  // namespace oracle
