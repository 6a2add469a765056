#pragma once

// Boolean filter expressions shared by SPARQL FILTER clauses and ontology
// rule filters: and/or/not over comparisons and regex().

#include <functional>
#include <memory>
#include <regex>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "wikibridge/term.hpp"

namespace wikibridge {

struct Variable {
  std::string name;  // without the leading '?'
  auto operator<=>(const Variable&) const = default;
};

using Operand = std::variant<Variable, Term>;

// Graph-less pattern; positions are constants or variables.
struct TriplePattern {
  Operand s;
  Operand p;
  Operand o;
  bool operator==(const TriplePattern&) const = default;
};

void collectVariables(const TriplePattern& pattern, std::set<std::string>& out);

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view compareOpSymbol(CompareOp op);

struct FilterExpr {
  enum class Kind { And, Or, Not, Compare, Regex };

  Kind kind = Kind::Compare;
  std::vector<FilterExpr> children;  // And/Or: two, Not: one

  CompareOp op = CompareOp::Eq;
  Operand lhs = Variable{};
  Operand rhs = Variable{};

  Variable regexTarget;
  std::string pattern;
  std::string flags;  // "" or "i"
  std::shared_ptr<const std::regex> compiled;

  static FilterExpr compare(CompareOp op, Operand lhs, Operand rhs);
  // Throws std::regex_error on a bad pattern.
  static FilterExpr regex(Variable target, std::string pattern, std::string flags = {});
  static FilterExpr both(FilterExpr a, FilterExpr b);
  static FilterExpr either(FilterExpr a, FilterExpr b);
  static FilterExpr negate(FilterExpr a);

  bool operator==(const FilterExpr& other) const;
};

// SPARQL three-valued logic: a type error propagates as Error unless masked by
// `false && e` or `true || e`.
enum class Truth { False, True, Error };

using BindingLookup = std::function<const Term*(const std::string& variable)>;

Truth evaluateFilter(const FilterExpr& expr, const BindingLookup& lookup);

// Comparison of two bound terms under `op`. Numeric literals compare by value;
// other literals compare lexically only within one datatype; IRIs and blank
// nodes support only = and !=.
Truth compareTerms(CompareOp op, const Term& a, const Term& b);

void collectVariables(const FilterExpr& expr, std::set<std::string>& out);

// Surface syntax readable by both the SPARQL and the ontology DSL parsers.
std::string renderFilter(const FilterExpr& expr);
std::string renderOperand(const Operand& operand);
std::string renderTerm(const Term& term);

}  // namespace wikibridge
