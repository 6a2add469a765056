#include "wikibridge/json.hpp"

namespace wikibridge {

Json termToJson(const Term& term) {
  switch (term.kind) {
    case TermKind::Iri: return {{"type", "uri"}, {"value", term.value}};
    case TermKind::Blank: return {{"type", "bnode"}, {"value", term.value}};
    case TermKind::Literal: break;
  }
  return {{"type", "literal"},
          {"value", term.value},
          {"datatype", std::string(datatypeIri(term.datatype))}};
}

std::optional<Term> termFromJson(const Json& j) {
  if (!j.is_object() || !j.contains("type") || !j.contains("value")) return std::nullopt;
  if (!j["type"].is_string() || !j["value"].is_string()) return std::nullopt;
  const auto type = j["type"].get<std::string>();
  auto value = j["value"].get<std::string>();
  if (type == "uri") return Term::iri(std::move(value));
  if (type == "bnode") return Term::blank(std::move(value));
  if (type != "literal") return std::nullopt;
  Datatype dt = Datatype::String;
  if (j.contains("datatype")) {
    if (!j["datatype"].is_string()) return std::nullopt;
    auto parsed = datatypeFromIri(j["datatype"].get<std::string>());
    if (!parsed) return std::nullopt;
    dt = *parsed;
  }
  return Term::literal(std::move(value), dt);
}

Json quadToJson(const Quad& q) {
  return {{"s", termToJson(q.s)},
          {"p", termToJson(q.p)},
          {"o", termToJson(q.o)},
          {"g", termToJson(q.g)}};
}

Json resultsToJson(const QueryResult& result) {
  Json bindings = Json::array();
  for (const auto& row : result.rows) {
    Json b = Json::object();
    for (std::size_t i = 0; i < result.vars.size(); ++i) {
      if (row[i]) b[result.vars[i]] = termToJson(*row[i]);
    }
    bindings.push_back(std::move(b));
  }
  return {{"head", {{"vars", result.vars}}}, {"results", {{"bindings", std::move(bindings)}}}};
}

Json spanToJson(const Span& span) { return {{"start", span.start}, {"end", span.end}}; }

Json diagnosticToJson(const ParseDiagnostic& d) {
  return {{"kind", std::string(parseErrorKindName(d.kind))},
          {"span", spanToJson(d.span)},
          {"message", d.message}};
}

Json violationToJson(const Violation& v) {
  Json j = {{"kind", std::string(violationKindName(v.kind))},
            {"subject", termToJson(v.subject)},
            {"detail", v.detail}};
  if (v.ruleName) j["rule"] = *v.ruleName;
  j["span"] = v.span ? spanToJson(*v.span) : Json();
  return j;
}

Json reportToJson(const ValidationReport& report) {
  Json violations = Json::array();
  for (const auto& v : report.violations) violations.push_back(violationToJson(v));
  Json diagnostics = Json::array();
  for (const auto& d : report.diagnostics) diagnostics.push_back(diagnosticToJson(d));
  return {{"page", report.page},
          {"namespace", report.ns},
          {"revision", report.revision},
          {"conforms", report.conforms()},
          {"checked_at", report.checkedAt},
          {"ontology_hash", report.ontologyHash},
          {"violations", std::move(violations)},
          {"diagnostics", std::move(diagnostics)}};
}

// ____________________________________________________________________________
namespace {

std::optional<Span> spanFromJson(const Json& j) {
  if (!j.is_object() || !j.contains("start") || !j.contains("end")) return std::nullopt;
  if (!j["start"].is_number_unsigned() || !j["end"].is_number_unsigned()) return std::nullopt;
  return Span{j["start"].get<std::size_t>(), j["end"].get<std::size_t>()};
}

std::optional<ViolationKind> violationKindFromName(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(ViolationKind::RuleViolation); ++i) {
    auto kind = static_cast<ViolationKind>(i);
    if (violationKindName(kind) == name) return kind;
  }
  return std::nullopt;
}

std::optional<ParseErrorKind> parseErrorKindFromName(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(ParseErrorKind::InvalidEncoding); ++i) {
    auto kind = static_cast<ParseErrorKind>(i);
    if (parseErrorKindName(kind) == name) return kind;
  }
  return std::nullopt;
}

}  // namespace

std::optional<ValidationReport> reportFromJson(const Json& j) {
  try {
    ValidationReport r;
    r.page = j.at("page").get<std::string>();
    r.ns = j.at("namespace").get<std::string>();
    r.revision = j.at("revision").get<long>();
    r.checkedAt = j.at("checked_at").get<std::string>();
    r.ontologyHash = j.at("ontology_hash").get<std::string>();
    for (const auto& v : j.at("violations")) {
      auto kind = violationKindFromName(v.at("kind").get<std::string>());
      auto subject = termFromJson(v.at("subject"));
      if (!kind || !subject) return std::nullopt;
      Violation out{*kind, *subject, v.at("detail").get<std::string>(), std::nullopt,
                    std::nullopt};
      if (v.contains("rule")) out.ruleName = v["rule"].get<std::string>();
      if (v.contains("span") && !v["span"].is_null()) {
        out.span = spanFromJson(v["span"]);
        if (!out.span) return std::nullopt;
      }
      r.violations.push_back(std::move(out));
    }
    for (const auto& d : j.at("diagnostics")) {
      auto kind = parseErrorKindFromName(d.at("kind").get<std::string>());
      auto span = spanFromJson(d.at("span"));
      if (!kind || !span) return std::nullopt;
      r.diagnostics.push_back({*kind, *span, d.at("message").get<std::string>()});
    }
    return r;
  } catch (const Json::exception&) {
    return std::nullopt;
  }
}

}  // namespace wikibridge
