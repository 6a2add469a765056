#pragma once

// Lowering of parsed annotations into quads, subclass closure, and
// conformance checking against an ontology.
//
// Lowering rules (subject of every top-level block is the page):
//   simple pair  key=v        (subj, wb:onto/key, v)        `type` -> rdf:type wb:onto/<v>
//   n-ary block  {{#rel: R}}  (subj, wb:rel/R, _:n) (_:n, rdf:type, wb:onto/R) + one quad per role
//   nested value key={{...}}  (subj, wb:onto/key, _:n) and the inner block lowered with subject _:n;
//                             a nested n-ary block also gets (_:n, rdf:type, wb:onto/R)
// Blank nodes are labelled a1, a2, ... in document order.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wikibridge/markup.hpp"
#include "wikibridge/ontology.hpp"
#include "wikibridge/store.hpp"

namespace wikibridge {

struct LoweringResult {
  Term graph;                                // wb:graph/<key>/<revision>
  std::vector<Quad> quads;                   // all in `graph`
  std::vector<Quad> metaQuads;               // 4 provenance quads in wb:graph/meta, or none
  std::vector<std::pair<Span, Term>> nodeMap;  // node span -> subject, document order

  const Term* subjectOf(const Span& nodeSpan) const;
};

LoweringResult lowerPage(const ParsedPage& parsed, long revision, std::string_view author,
                         std::string_view timestamp);

// Prefix for blank labels of one page when its quads join the shared store,
// so `_:a1` of two pages never collide. Deterministic in (ns, title).
std::string blankScope(std::string_view ns, std::string_view title);
std::vector<Quad> scopeBlankNodes(std::vector<Quad> quads, std::string_view scope);

// rdf:type statements implied by subclass transitivity, in wb:graph/inferred.
// Contains only triples absent from the input; sorted, duplicate-free.
std::vector<Quad> rdfsClosure(const std::vector<Quad>& quads, const Ontology& ontology);

// Closure over every revision graph of the store.
std::vector<Quad> rdfsClosure(const QuadStore& store, const Ontology& ontology);

enum class ViolationKind {
  UndefinedTerm,
  DomainViolation,
  RangeViolation,
  DatatypeViolation,
  CardinalityViolation,
  NAryArity,
  RuleViolation,
};

std::string_view violationKindName(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  Term subject;
  std::string detail;
  std::optional<std::string> ruleName;  // iff kind == RuleViolation
  std::optional<Span> span;

  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  std::string page;
  std::string ns = "Main";
  long revision = 0;
  std::vector<Violation> violations;
  std::string checkedAt;
  std::string ontologyHash;                 // model the report was computed against
  std::vector<ParseDiagnostic> diagnostics;  // set when the page did not parse

  bool conforms() const { return violations.empty() && diagnostics.empty(); }
};

// Checks one lowered page. `context` (may be null) supplies the rest of the
// wiki: its revision graphs other than this page's and its inferred graph.
// Rules run wiki-wide; only bindings touching a subject of this page are
// reported. The result is ordered by (span, kind, detail).
ValidationReport checkPage(const ParsedPage& parsed, const LoweringResult& lowered,
                           const Ontology& ontology, const QuadStore* context,
                           std::string_view checkedAt);

// Report for a page that failed to parse.
ValidationReport parseFailureReport(const PageSource& source, long revision,
                                    std::vector<ParseDiagnostic> diagnostics,
                                    std::string_view checkedAt);

}  // namespace wikibridge
