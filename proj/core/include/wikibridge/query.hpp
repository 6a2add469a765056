#pragma once

// SPARQL subset: PREFIX, SELECT [DISTINCT], one basic graph pattern with
// FILTERs, ORDER BY, LIMIT, OFFSET.
//
// Patterns range over the revision graphs of the store (plus wb:graph/inferred
// with entailment on). A pattern whose predicate is a concrete wb:meta/ IRI
// ranges over wb:graph/meta instead.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wikibridge/expr.hpp"
#include "wikibridge/store.hpp"

namespace wikibridge {

struct OrderKey {
  std::string var;
  bool descending = false;
  bool operator==(const OrderKey&) const = default;
};

struct Query {
  std::map<std::string, std::string> prefixes;  // declared in the text
  bool distinct = false;
  bool selectAll = false;
  std::vector<std::string> select;  // explicit projection, in order
  std::vector<TriplePattern> where;
  std::vector<FilterExpr> filters;
  std::vector<OrderKey> orderBy;
  std::optional<std::size_t> limit;
  std::optional<std::size_t> offset;

  // Pattern variables in order of first appearance.
  std::vector<std::string> patternVariables() const;
  // Result header: `select`, or patternVariables() for `SELECT *`.
  std::vector<std::string> projection() const;

  bool operator==(const Query&) const = default;
};

enum class QueryErrorKind { Syntax, UnknownPrefix };

struct QueryError {
  QueryErrorKind kind = QueryErrorKind::Syntax;
  std::size_t offset = 0;  // byte offset into the query text
  std::string message;
};

struct QueryParseResult {
  std::optional<Query> query;
  std::optional<QueryError> error;
};

QueryParseResult parseQuery(std::string_view text);

// One row per solution, aligned with QueryResult::vars; nullopt = unbound.
using Row = std::vector<std::optional<Term>>;

struct QueryResult {
  std::vector<std::string> vars;
  std::vector<Row> rows;
  std::size_t typeErrors = 0;  // solutions dropped because a filter raised an error
};

// Reads a consistent snapshot; safe to call concurrently with other readers.
QueryResult evaluate(const Query& query, const QuadStore& store, bool entailment);

}  // namespace wikibridge
