#include "wikibridge/term.hpp"

#include <cstdio>

namespace wikibridge {

std::strong_ordering Term::operator<=>(const Term& other) const {
  if (auto c = kind <=> other.kind; c != 0) return c;
  if (auto c = value.compare(other.value); c != 0) {
    return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (!isLiteral()) return std::strong_ordering::equal;
  return datatypeName(datatype).compare(datatypeName(other.datatype)) <=> 0;
}

std::size_t TermHash::operator()(const Term& t) const noexcept {
  std::size_t h = std::hash<std::string>{}(t.value);
  h ^= (static_cast<std::size_t>(t.kind) + 1) * 0x9E3779B97F4A7C15ULL;
  if (t.isLiteral()) h ^= (static_cast<std::size_t>(t.datatype) + 7) << 17;
  return h;
}

std::string toNTriples(const Term& term) {
  switch (term.kind) {
    case TermKind::Iri: return "<" + term.value + ">";
    case TermKind::Blank: return "_:" + term.value;
    case TermKind::Literal: break;
  }
  std::string out = "\"";
  for (char ch : term.value) {
    auto c = static_cast<unsigned char>(ch);
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20 || c == 0x7F) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04X", c);
          out += buf;
        } else {
          out.push_back(ch);
        }
    }
  }
  out += "\"^^<";
  out += datatypeIri(term.datatype);
  out += ">";
  return out;
}

bool isAbsoluteIri(std::string_view iri) {
  auto colon = iri.find(':');
  if (colon == std::string_view::npos || colon == 0) return false;
  auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); };
  if (!alpha(iri[0])) return false;
  for (char c : iri.substr(1, colon - 1)) {
    if (!alpha(c) && !(c >= '0' && c <= '9') && c != '+' && c != '-' && c != '.') {
      return false;
    }
  }
  for (char ch : iri) {
    auto c = static_cast<unsigned char>(ch);
    if (c <= 0x20 || c == 0x7F) return false;
    switch (ch) {
      case '<': case '>': case '"': case '{': case '}':
      case '|': case '\\': case '^': case '`':
        return false;
      default: break;
    }
  }
  return true;
}

bool isValidBlankLabel(std::string_view label) {
  if (label.empty() || label.front() == '-' || label.front() == '.' || label.back() == '.') {
    return false;
  }
  for (char c : label) {
    bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
              c == '_' || c == '-' || c == '.';
    if (!ok) return false;
  }
  return true;
}

bool isValidTerm(const Term& term) {
  switch (term.kind) {
    case TermKind::Iri: return isAbsoluteIri(term.value);
    case TermKind::Blank: return isValidBlankLabel(term.value);
    case TermKind::Literal: return isValidLexical(term.datatype, term.value);
  }
  return false;
}

}  // namespace wikibridge
