#pragma once

// JSON documents exchanged over HTTP and stored next to page revisions.

#include <nlohmann/json.hpp>

#include "wikibridge/markup.hpp"
#include "wikibridge/query.hpp"
#include "wikibridge/semantics.hpp"
#include "wikibridge/store.hpp"

namespace wikibridge {

using Json = nlohmann::json;

// {"type": "uri"|"bnode"|"literal", "value": ..., "datatype": <xsd iri>}
Json termToJson(const Term& term);
std::optional<Term> termFromJson(const Json& j);

Json quadToJson(const Quad& q);

// {"head": {"vars": [...]}, "results": {"bindings": [...]}}
Json resultsToJson(const QueryResult& result);

Json spanToJson(const Span& span);
Json diagnosticToJson(const ParseDiagnostic& d);
Json violationToJson(const Violation& v);
Json reportToJson(const ValidationReport& report);
// Inverse of reportToJson; nullopt on malformed input.
std::optional<ValidationReport> reportFromJson(const Json& j);

}  // namespace wikibridge
