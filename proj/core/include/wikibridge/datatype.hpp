#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace wikibridge {

// The five literal datatypes. There are no user-defined datatypes.
enum class Datatype { String, Integer, Decimal, Boolean, Date };

inline constexpr Datatype kAllDatatypes[] = {Datatype::String, Datatype::Integer,
                                             Datatype::Decimal, Datatype::Boolean,
                                             Datatype::Date};

// Short name as used in wikitext (`"850"^^integer`) and the ontology DSL.
std::string_view datatypeName(Datatype dt);
std::optional<Datatype> datatypeFromName(std::string_view name);

// XSD IRI, e.g. http://www.w3.org/2001/XMLSchema#integer.
std::string_view datatypeIri(Datatype dt);
std::optional<Datatype> datatypeFromIri(std::string_view iri);

// Lexical-space checks.
//   integer: optional sign followed by one or more digits
//   decimal: optional sign, digits, at most one point with digits on both sides
//   boolean: `true` | `false`
//   date:    YYYY-MM-DD with a real calendar day
bool isValidLexical(Datatype dt, std::string_view lexical);

bool isIntegerLexical(std::string_view s);
bool isDecimalLexical(std::string_view s);
bool isDateLexical(std::string_view s);

// Numeric value of an integer or decimal lexical form.
long double numericValue(std::string_view lexical);

}  // namespace wikibridge
