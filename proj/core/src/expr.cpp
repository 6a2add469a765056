#include "wikibridge/expr.hpp"

#include "wikibridge/vocabulary.hpp"

namespace wikibridge {

std::string_view compareOpSymbol(CompareOp op) {
  switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Ne: return "!=";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
  }
  return "=";
}

FilterExpr FilterExpr::compare(CompareOp op, Operand lhs, Operand rhs) {
  FilterExpr e;
  e.kind = Kind::Compare;
  e.op = op;
  e.lhs = std::move(lhs);
  e.rhs = std::move(rhs);
  return e;
}

FilterExpr FilterExpr::regex(Variable target, std::string pattern, std::string flags) {
  FilterExpr e;
  e.kind = Kind::Regex;
  e.regexTarget = std::move(target);
  auto syntax = std::regex::ECMAScript;
  if (flags.find('i') != std::string::npos) syntax |= std::regex::icase;
  e.compiled = std::make_shared<const std::regex>(pattern, syntax);
  e.pattern = std::move(pattern);
  e.flags = std::move(flags);
  return e;
}

FilterExpr FilterExpr::both(FilterExpr a, FilterExpr b) {
  FilterExpr e;
  e.kind = Kind::And;
  e.children.push_back(std::move(a));
  e.children.push_back(std::move(b));
  return e;
}

FilterExpr FilterExpr::either(FilterExpr a, FilterExpr b) {
  FilterExpr e;
  e.kind = Kind::Or;
  e.children.push_back(std::move(a));
  e.children.push_back(std::move(b));
  return e;
}

FilterExpr FilterExpr::negate(FilterExpr a) {
  FilterExpr e;
  e.kind = Kind::Not;
  e.children.push_back(std::move(a));
  return e;
}

bool FilterExpr::operator==(const FilterExpr& other) const {
  if (kind != other.kind) return false;
  switch (kind) {
    case Kind::And:
    case Kind::Or:
    case Kind::Not: return children == other.children;
    case Kind::Compare: return op == other.op && lhs == other.lhs && rhs == other.rhs;
    case Kind::Regex:
      return regexTarget == other.regexTarget && pattern == other.pattern &&
             flags == other.flags;
  }
  return false;
}

// ____________________________________________________________________________
Truth compareTerms(CompareOp op, const Term& a, const Term& b) {
  int cmp = 0;
  bool orderable = false;
  if (a.isNumeric() && b.isNumeric()) {
    long double x = numericValue(a.value);
    long double y = numericValue(b.value);
    cmp = x < y ? -1 : (x > y ? 1 : 0);
    orderable = true;
  } else if (a.isLiteral() && b.isLiteral()) {
    if (a.datatype != b.datatype) return Truth::Error;
    int c = a.value.compare(b.value);
    cmp = c < 0 ? -1 : (c > 0 ? 1 : 0);
    orderable = true;
  } else if (a.isLiteral() != b.isLiteral()) {
    if (op == CompareOp::Eq) return Truth::False;
    if (op == CompareOp::Ne) return Truth::True;
    return Truth::Error;
  } else {
    cmp = a == b ? 0 : 1;
  }
  auto truth = [](bool v) { return v ? Truth::True : Truth::False; };
  switch (op) {
    case CompareOp::Eq: return truth(cmp == 0);
    case CompareOp::Ne: return truth(cmp != 0);
    default: break;
  }
  if (!orderable) return Truth::Error;
  switch (op) {
    case CompareOp::Lt: return truth(cmp < 0);
    case CompareOp::Le: return truth(cmp <= 0);
    case CompareOp::Gt: return truth(cmp > 0);
    case CompareOp::Ge: return truth(cmp >= 0);
    default: return Truth::Error;
  }
}

namespace {

const Term* resolve(const Operand& operand, const BindingLookup& lookup) {
  if (auto* v = std::get_if<Variable>(&operand)) return lookup(v->name);
  return &std::get<Term>(operand);
}

}  // namespace

Truth evaluateFilter(const FilterExpr& expr, const BindingLookup& lookup) {
  switch (expr.kind) {
    case FilterExpr::Kind::And: {
      Truth a = evaluateFilter(expr.children[0], lookup);
      if (a == Truth::False) return Truth::False;
      Truth b = evaluateFilter(expr.children[1], lookup);
      if (b == Truth::False) return Truth::False;
      return a == Truth::True && b == Truth::True ? Truth::True : Truth::Error;
    }
    case FilterExpr::Kind::Or: {
      Truth a = evaluateFilter(expr.children[0], lookup);
      if (a == Truth::True) return Truth::True;
      Truth b = evaluateFilter(expr.children[1], lookup);
      if (b == Truth::True) return Truth::True;
      return a == Truth::False && b == Truth::False ? Truth::False : Truth::Error;
    }
    case FilterExpr::Kind::Not: {
      Truth a = evaluateFilter(expr.children[0], lookup);
      if (a == Truth::Error) return Truth::Error;
      return a == Truth::True ? Truth::False : Truth::True;
    }
    case FilterExpr::Kind::Compare: {
      const Term* a = resolve(expr.lhs, lookup);
      const Term* b = resolve(expr.rhs, lookup);
      if (!a || !b) return Truth::Error;
      return compareTerms(expr.op, *a, *b);
    }
    case FilterExpr::Kind::Regex: {
      const Term* t = lookup(expr.regexTarget.name);
      if (!t || !t->isLiteral() || !expr.compiled) return Truth::Error;
      return std::regex_search(t->value, *expr.compiled) ? Truth::True : Truth::False;
    }
  }
  return Truth::Error;
}

void collectVariables(const TriplePattern& pattern, std::set<std::string>& out) {
  for (const Operand* op : {&pattern.s, &pattern.p, &pattern.o}) {
    if (auto* v = std::get_if<Variable>(op)) out.insert(v->name);
  }
}

void collectVariables(const FilterExpr& expr, std::set<std::string>& out) {
  for (const auto& child : expr.children) collectVariables(child, out);
  if (expr.kind == FilterExpr::Kind::Compare) {
    if (auto* v = std::get_if<Variable>(&expr.lhs)) out.insert(v->name);
    if (auto* v = std::get_if<Variable>(&expr.rhs)) out.insert(v->name);
  } else if (expr.kind == FilterExpr::Kind::Regex) {
    out.insert(expr.regexTarget.name);
  }
}

// ____________________________________________________________________________
namespace {

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string renderTerm(const Term& term) {
  switch (term.kind) {
    case TermKind::Iri: return compactIri(term.value);
    case TermKind::Blank: return "_:" + term.value;
    case TermKind::Literal: break;
  }
  if (term.datatype == Datatype::String) return quote(term.value);
  return quote(term.value) + "^^xsd:" + std::string(datatypeName(term.datatype));
}

std::string renderOperand(const Operand& operand) {
  if (auto* v = std::get_if<Variable>(&operand)) return "?" + v->name;
  return renderTerm(std::get<Term>(operand));
}

std::string renderFilter(const FilterExpr& expr) {
  switch (expr.kind) {
    case FilterExpr::Kind::And:
      return "(" + renderFilter(expr.children[0]) + " && " + renderFilter(expr.children[1]) +
             ")";
    case FilterExpr::Kind::Or:
      return "(" + renderFilter(expr.children[0]) + " || " + renderFilter(expr.children[1]) +
             ")";
    case FilterExpr::Kind::Not: return "!(" + renderFilter(expr.children[0]) + ")";
    case FilterExpr::Kind::Compare:
      return renderOperand(expr.lhs) + " " + std::string(compareOpSymbol(expr.op)) + " " +
             renderOperand(expr.rhs);
    case FilterExpr::Kind::Regex: {
      std::string out = "regex(?" + expr.regexTarget.name + ", " + quote(expr.pattern);
      if (!expr.flags.empty()) out += ", " + quote(expr.flags);
      return out + ")";
    }
  }
  return {};
}

}  // namespace wikibridge
