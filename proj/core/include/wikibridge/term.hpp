#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "wikibridge/datatype.hpp"

namespace wikibridge {

// Declaration order is the canonical term order: Blank < Iri < Literal.
enum class TermKind : unsigned char { Blank, Iri, Literal };

struct Term {
  TermKind kind = TermKind::Iri;
  std::string value;  // IRI text, blank label (no `_:`), or literal lexical form
  Datatype datatype = Datatype::String;  // meaningful for literals only

  static Term iri(std::string v) { return {TermKind::Iri, std::move(v), Datatype::String}; }
  static Term blank(std::string label) {
    return {TermKind::Blank, std::move(label), Datatype::String};
  }
  static Term literal(std::string lexical, Datatype dt = Datatype::String) {
    return {TermKind::Literal, std::move(lexical), dt};
  }

  bool isIri() const { return kind == TermKind::Iri; }
  bool isBlank() const { return kind == TermKind::Blank; }
  bool isLiteral() const { return kind == TermKind::Literal; }
  bool isNumeric() const {
    return isLiteral() && (datatype == Datatype::Integer || datatype == Datatype::Decimal);
  }

  // Canonical order: kind, then value, then datatype.
  std::strong_ordering operator<=>(const Term& other) const;
  bool operator==(const Term& other) const = default;
};

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept;
};

// N-Triples / N-Quads surface form: <iri>, _:label, "lex"^^<datatype-iri>.
std::string toNTriples(const Term& term);

// scheme ":" rest, with no whitespace, controls or <>"{}|\^` characters.
bool isAbsoluteIri(std::string_view iri);
bool isValidBlankLabel(std::string_view label);
bool isValidTerm(const Term& term);

}  // namespace wikibridge
