#include "wikibridge/query.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <unordered_map>

#include "syntax.hpp"
#include "wikibridge/vocabulary.hpp"

namespace wikibridge {

std::vector<std::string> Query::patternVariables() const {
  std::vector<std::string> out;
  for (const auto& p : where) {
    for (const Operand* op : {&p.s, &p.p, &p.o}) {
      if (auto* v = std::get_if<Variable>(op)) {
        if (std::find(out.begin(), out.end(), v->name) == out.end()) out.push_back(v->name);
      }
    }
  }
  return out;
}

std::vector<std::string> Query::projection() const {
  return selectAll ? patternVariables() : select;
}

// ____________________________________________________________________________
namespace {

using detail::Tok;
using detail::TokenCursor;

bool equalsIgnoreCase(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

std::size_t readCount(TokenCursor& cur, const char* what) {
  const auto& t = cur.peek();
  std::size_t value = 0;
  if (t.kind != Tok::Number ||
      std::from_chars(t.text.data(), t.text.data() + t.text.size(), value).ptr !=
          t.text.data() + t.text.size()) {
    cur.fail(std::string("expected a non-negative integer after ") + what);
  }
  cur.next();
  return value;
}

Query parseTokens(TokenCursor& cur) {
  Query q;
  detail::TermReader reader;
  reader.prefixes = vocab::standardPrefixes();
  while (cur.acceptWord("PREFIX")) {
    const auto& name = cur.expect(Tok::PName, "a prefix name like 'ex:'");
    if (name.text.back() != ':' || name.text.find(':') != name.text.size() - 1) {
      throw detail::SyntaxError{name.offset, "prefix declaration must end with ':'"};
    }
    const auto& iri = cur.expect(Tok::IriRef, "an <iri>");
    std::string prefix = name.text.substr(0, name.text.size() - 1);
    q.prefixes[prefix] = iri.text;
    reader.prefixes[prefix] = iri.text;
  }
  if (!cur.acceptWord("SELECT")) cur.fail("expected SELECT");
  q.distinct = cur.acceptWord("DISTINCT");
  std::vector<std::size_t> selectOffsets;
  if (cur.accept(Tok::Star)) {
    q.selectAll = true;
  } else {
    while (cur.peek().kind == Tok::Var) {
      std::size_t at = cur.peek().offset;
      std::string v = cur.next().text;
      if (std::find(q.select.begin(), q.select.end(), v) == q.select.end()) {
        q.select.push_back(std::move(v));
        selectOffsets.push_back(at);
      }
    }
    if (q.select.empty()) cur.fail("expected '*' or at least one variable");
  }
  if (!cur.acceptWord("WHERE")) cur.fail("expected WHERE");
  cur.expect(Tok::LBrace, "'{'");
  while (!cur.accept(Tok::RBrace)) {
    if (cur.acceptWord("FILTER")) {
      cur.expect(Tok::LParen, "'('");
      q.filters.push_back(reader.readFilter(cur));
      cur.expect(Tok::RParen, "')'");
      continue;
    }
    TriplePattern p;
    std::size_t at = cur.peek().offset;
    p.s = reader.readOperand(cur);
    p.p = reader.readOperand(cur);
    p.o = reader.readOperand(cur);
    if (auto* t = std::get_if<Term>(&p.s); t && t->isLiteral()) {
      throw detail::SyntaxError{at, "subject must not be a literal"};
    }
    if (auto* t = std::get_if<Term>(&p.p); t && !t->isIri()) {
      throw detail::SyntaxError{at, "predicate must be an IRI or a variable"};
    }
    q.where.push_back(std::move(p));
    bool filterNext = cur.peek().kind == Tok::Word && equalsIgnoreCase(cur.peek().text, "FILTER");
    if (!cur.accept(Tok::Dot) && cur.peek().kind != Tok::RBrace && !filterNext) {
      cur.fail("expected '.' or '}'");
    }
  }
  if (q.where.empty()) throw detail::SyntaxError{cur.peek().offset, "empty pattern block"};
  auto inPatterns = q.patternVariables();
  for (std::size_t i = 0; i < q.select.size(); ++i) {
    if (std::find(inPatterns.begin(), inPatterns.end(), q.select[i]) == inPatterns.end()) {
      throw detail::SyntaxError{selectOffsets[i],
                                "?" + q.select[i] + " does not occur in the pattern block"};
    }
  }
  if (cur.acceptWord("ORDER")) {
    if (!cur.acceptWord("BY")) cur.fail("expected BY");
    while (true) {
      OrderKey key;
      bool asc = cur.acceptWord("ASC");
      key.descending = !asc && cur.acceptWord("DESC");
      if (asc || key.descending) {
        cur.expect(Tok::LParen, "'('");
        key.var = cur.expect(Tok::Var, "a variable").text;
        cur.expect(Tok::RParen, "')'");
      } else if (cur.peek().kind == Tok::Var) {
        key.var = cur.next().text;
      } else {
        break;
      }
      q.orderBy.push_back(std::move(key));
    }
    if (q.orderBy.empty()) cur.fail("expected an ORDER BY key");
  }
  for (int i = 0; i < 2; ++i) {
    if (!q.limit && cur.acceptWord("LIMIT")) {
      q.limit = readCount(cur, "LIMIT");
    } else if (!q.offset && cur.acceptWord("OFFSET")) {
      q.offset = readCount(cur, "OFFSET");
    }
  }
  if (cur.peek().kind != Tok::End) cur.fail("unexpected trailing input");
  return q;
}

}  // namespace

QueryParseResult parseQuery(std::string_view text) {
  QueryParseResult result;
  try {
    auto tokens = detail::tokenize(text);
    TokenCursor cur(tokens);
    result.query = parseTokens(cur);
  } catch (const detail::SyntaxError& e) {
    result.error = QueryError{e.unknownPrefix ? QueryErrorKind::UnknownPrefix
                                              : QueryErrorKind::Syntax,
                              e.offset, e.message};
  }
  return result;
}

// ____________________________________________________________________________
namespace {

using Id = QuadStore::Id;
constexpr Id kUnbound = QuadStore::kMaxId;

enum class Scope { Data, Meta };

struct IdPattern {
  // Constant id, or a variable slot.
  struct Pos {
    bool isVar = false;
    Id id = 0;
    std::size_t slot = 0;
  };
  Pos s, p, o;
  Scope scope = Scope::Data;
};

class Evaluator {
 public:
  Evaluator(const QuadStore& store, bool entailment) : store_(store), entailment_(entailment) {
    inferred_ = store.idOf(Term::iri(vocab::inferredGraphIri()));
    meta_ = store.idOf(Term::iri(vocab::metaGraphIri()));
  }

  // Distinct solutions over `vars` (ids, kUnbound never appears).
  std::vector<std::vector<Id>> solve(const Query& q, const std::vector<std::string>& vars) {
    std::vector<IdPattern> patterns;
    for (const auto& tp : q.where) {
      IdPattern ip;
      bool unknownConstant = false;
      auto pos = [&](const Operand& op) {
        IdPattern::Pos out;
        if (auto* v = std::get_if<Variable>(&op)) {
          out.isVar = true;
          out.slot = std::find(vars.begin(), vars.end(), v->name) - vars.begin();
        } else if (auto id = store_.idOf(std::get<Term>(op))) {
          out.id = *id;
        } else {
          unknownConstant = true;
        }
        return out;
      };
      ip.s = pos(tp.s);
      ip.p = pos(tp.p);
      ip.o = pos(tp.o);
      if (auto* t = std::get_if<Term>(&tp.p); t && vocab::isMetaPredicate(t->value)) {
        ip.scope = Scope::Meta;
      }
      if (unknownConstant) return {};
      patterns.push_back(ip);
    }
    std::vector<Id> binding(vars.size(), kUnbound);
    std::vector<bool> used(patterns.size(), false);
    std::set<std::vector<Id>> out;
    join(patterns, used, binding, out);
    return {out.begin(), out.end()};
  }

 private:
  bool inScope(Id g, Scope scope) const {
    if (scope == Scope::Meta) return meta_ && g == *meta_;
    if (inferred_ && g == *inferred_) return entailment_;
    auto [it, fresh] = revision_.try_emplace(g, false);
    if (fresh) it->second = vocab::isRevisionGraph(store_.term(g).value);
    return it->second;
  }

  static std::optional<Id> value(const IdPattern::Pos& pos, const std::vector<Id>& b) {
    if (!pos.isVar) return pos.id;
    if (b[pos.slot] == kUnbound) return std::nullopt;
    return b[pos.slot];
  }

  void join(const std::vector<IdPattern>& patterns, std::vector<bool>& used,
            std::vector<Id>& binding, std::set<std::vector<Id>>& out) const {
    int best = -1;
    int bestScore = -1;
    for (std::size_t i = 0; i < patterns.size(); ++i) {
      if (used[i]) continue;
      const auto& p = patterns[i];
      int score = (value(p.s, binding) ? 4 : 0) + (value(p.o, binding) ? 2 : 0) +
                  (value(p.p, binding) ? 1 : 0);
      if (score > bestScore) {
        bestScore = score;
        best = static_cast<int>(i);
      }
    }
    if (best < 0) {
      out.insert(binding);
      return;
    }
    const IdPattern& p = patterns[best];
    used[best] = true;
    std::vector<QuadStore::IdQuad> matches;
    store_.forEachMatch(value(p.s, binding), value(p.p, binding), value(p.o, binding),
                        std::nullopt, [&](const QuadStore::IdQuad& q) {
                          if (inScope(q.g, p.scope)) matches.push_back(q);
                        });
    for (const auto& q : matches) {
      std::vector<std::size_t> added;
      bool ok = true;
      for (auto [pos, id] : {std::pair{&p.s, q.s}, {&p.p, q.p}, {&p.o, q.o}}) {
        if (!pos->isVar) continue;
        Id& slot = binding[pos->slot];
        if (slot == kUnbound) {
          slot = id;
          added.push_back(pos->slot);
        } else if (slot != id) {
          ok = false;
          break;
        }
      }
      if (ok) join(patterns, used, binding, out);
      for (auto s : added) binding[s] = kUnbound;
    }
    used[best] = false;
  }

  const QuadStore& store_;
  bool entailment_;
  std::optional<Id> inferred_;
  std::optional<Id> meta_;
  mutable std::unordered_map<Id, bool> revision_;
};

int compareOptional(const std::optional<Term>& a, const std::optional<Term>& b) {
  if (!a || !b) return (a ? 1 : 0) - (b ? 1 : 0);
  auto c = *a <=> *b;
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

int compareKey(const std::optional<Term>& a, const std::optional<Term>& b) {
  if (a && b && a->isNumeric() && b->isNumeric()) {
    long double x = numericValue(a->value);
    long double y = numericValue(b->value);
    if (x != y) return x < y ? -1 : 1;
    return 0;
  }
  return compareOptional(a, b);
}

}  // namespace

QueryResult evaluate(const Query& query, const QuadStore& store, bool entailment) {
  QueryResult result;
  result.vars = query.projection();
  std::vector<std::string> vars = query.patternVariables();
  auto solutions = Evaluator(store, entailment).solve(query, vars);

  std::vector<Row> full;
  for (const auto& ids : solutions) {
    Row row;
    row.reserve(ids.size());
    for (Id id : ids) row.emplace_back(store.term(id));
    auto lookup = [&](const std::string& name) -> const Term* {
      auto it = std::find(vars.begin(), vars.end(), name);
      if (it == vars.end()) return nullptr;
      return &*row[it - vars.begin()];
    };
    bool keep = true;
    for (const auto& f : query.filters) {
      Truth t = evaluateFilter(f, lookup);
      if (t == Truth::Error) ++result.typeErrors;
      if (t != Truth::True) {
        keep = false;
        break;
      }
    }
    if (keep) full.push_back(std::move(row));
  }

  // Sort keys: ORDER BY keys, then the projected tuple, then every remaining
  // variable, all in canonical term order.
  auto slotOf = [&](const std::string& name) -> std::optional<std::size_t> {
    auto it = std::find(vars.begin(), vars.end(), name);
    if (it == vars.end()) return std::nullopt;
    return static_cast<std::size_t>(it - vars.begin());
  };
  std::vector<std::optional<std::size_t>> projected;
  for (const auto& v : result.vars) projected.push_back(slotOf(v));
  std::vector<std::size_t> tiebreak;
  for (const auto& slot : projected) {
    if (slot) tiebreak.push_back(*slot);
  }
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (std::find(tiebreak.begin(), tiebreak.end(), i) == tiebreak.end()) tiebreak.push_back(i);
  }
  static const std::optional<Term> kNone;
  auto at = [&](const Row& r, std::optional<std::size_t> slot) -> const std::optional<Term>& {
    return slot ? r[*slot] : kNone;
  };
  std::sort(full.begin(), full.end(), [&](const Row& a, const Row& b) {
    for (const auto& key : query.orderBy) {
      auto slot = slotOf(key.var);
      int c = compareKey(at(a, slot), at(b, slot));
      if (c != 0) return key.descending ? c > 0 : c < 0;
    }
    for (std::size_t slot : tiebreak) {
      int c = compareOptional(a[slot], b[slot]);
      if (c != 0) return c < 0;
    }
    return false;
  });

  std::set<Row> seen;
  std::size_t skip = query.offset.value_or(0);
  for (const auto& r : full) {
    Row row;
    for (const auto& slot : projected) row.push_back(at(r, slot));
    if (query.distinct && !seen.insert(row).second) continue;
    if (skip > 0) {
      --skip;
      continue;
    }
    if (query.limit && result.rows.size() >= *query.limit) break;
    result.rows.push_back(std::move(row));
  }
  return result;
}

}  // namespace wikibridge
