#include "wikibridge/datatype.hpp"

#include <cctype>
#include <cstdlib>
#include <string>

namespace wikibridge {

namespace {

constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";

bool allDigits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

std::string_view dropSign(std::string_view s) {
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) s.remove_prefix(1);
  return s;
}

}  // namespace

std::string_view datatypeName(Datatype dt) {
  switch (dt) {
    case Datatype::String: return "string";
    case Datatype::Integer: return "integer";
    case Datatype::Decimal: return "decimal";
    case Datatype::Boolean: return "boolean";
    case Datatype::Date: return "date";
  }
  return "string";
}

std::optional<Datatype> datatypeFromName(std::string_view name) {
  for (Datatype dt : kAllDatatypes) {
    if (datatypeName(dt) == name) return dt;
  }
  return std::nullopt;
}

std::string_view datatypeIri(Datatype dt) {
  switch (dt) {
    case Datatype::String: return "http://www.w3.org/2001/XMLSchema#string";
    case Datatype::Integer: return "http://www.w3.org/2001/XMLSchema#integer";
    case Datatype::Decimal: return "http://www.w3.org/2001/XMLSchema#decimal";
    case Datatype::Boolean: return "http://www.w3.org/2001/XMLSchema#boolean";
    case Datatype::Date: return "http://www.w3.org/2001/XMLSchema#date";
  }
  return "http://www.w3.org/2001/XMLSchema#string";
}

std::optional<Datatype> datatypeFromIri(std::string_view iri) {
  if (!iri.starts_with(kXsd)) return std::nullopt;
  return datatypeFromName(iri.substr(kXsd.size()));
}

bool isIntegerLexical(std::string_view s) { return allDigits(dropSign(s)); }

bool isDecimalLexical(std::string_view s) {
  s = dropSign(s);
  auto dot = s.find('.');
  if (dot == std::string_view::npos) return allDigits(s);
  return allDigits(s.substr(0, dot)) && allDigits(s.substr(dot + 1));
}

bool isDateLexical(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  if (!allDigits(s.substr(0, 4)) || !allDigits(s.substr(5, 2)) ||
      !allDigits(s.substr(8, 2))) {
    return false;
  }
  int year = std::stoi(std::string(s.substr(0, 4)));
  int month = std::stoi(std::string(s.substr(5, 2)));
  int day = std::stoi(std::string(s.substr(8, 2)));
  if (month < 1 || month > 12 || day < 1) return false;
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
  int limit = kDays[month - 1] + (month == 2 && leap ? 1 : 0);
  return day <= limit;
}

bool isValidLexical(Datatype dt, std::string_view lexical) {
  switch (dt) {
    case Datatype::String: return true;
    case Datatype::Integer: return isIntegerLexical(lexical);
    case Datatype::Decimal: return isDecimalLexical(lexical);
    case Datatype::Boolean: return lexical == "true" || lexical == "false";
    case Datatype::Date: return isDateLexical(lexical);
  }
  return false;
}

long double numericValue(std::string_view lexical) {
  std::string buf(lexical);
  return std::strtold(buf.c_str(), nullptr);
}

}  // namespace wikibridge
