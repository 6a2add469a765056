#pragma once

// IRI scheme. Everything lives under http://wikibridge.example/:
//   page/<key>              a wiki page (the subject of its annotations)
//   onto/<name>             ontology classes, properties, roles, relations
//   rel/<Relation>          link predicate from a subject to an n-ary node
//   graph/<key>/<rev>       annotation graph of one page revision
//   graph/meta              provenance of annotation graphs
//   graph/inferred          derived rdf:type statements
//   meta/<name>             provenance predicates
//
// <key> is the percent-encoded title for namespace Main and
// "<ns>:<title>" (both percent-encoded) otherwise.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace wikibridge::vocab {

inline constexpr std::string_view kBase = "http://wikibridge.example/";
inline constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kRdfType =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view kDefaultNamespace = "Main";

std::string pageKey(std::string_view ns, std::string_view title);
std::string pageIri(std::string_view ns, std::string_view title);
// Inverse of pageIri; nullopt for IRIs outside the page space.
std::optional<std::pair<std::string, std::string>> pageFromIri(std::string_view iri);

std::string ontoIri(std::string_view name);
std::string relIri(std::string_view relation);
std::string revisionGraphIri(std::string_view ns, std::string_view title, long revision);
std::string metaGraphIri();
std::string inferredGraphIri();
std::string metaPredicateIri(std::string_view name);  // fromPage, revision, author, timestamp

// Local name if `iri` is wb:onto/<name>.
std::optional<std::string> ontoName(std::string_view iri);

bool isRevisionGraph(std::string_view iri);
bool isMetaPredicate(std::string_view iri);

// wb:, rdf:, rdfs:, xsd:
const std::map<std::string, std::string>& standardPrefixes();

// prefix:local when a standard prefix applies and the local part is a plain
// name; <iri> otherwise.
std::string compactIri(std::string_view iri);
bool isPlainLocalName(std::string_view local);

}  // namespace wikibridge::vocab

namespace wikibridge {
using vocab::compactIri;
}
