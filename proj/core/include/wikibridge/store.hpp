#pragma once

// Indexed quad store with named graphs.
//
// Terms are interned to 32-bit ids. Each quad lives in four ordered indexes
// (SPOG, POSG, OSPG, GSPO) so every pattern with at least one concrete
// position is answered by a prefix range scan. Set semantics throughout.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wikibridge/term.hpp"

namespace wikibridge {

struct Quad {
  Term s;
  Term p;
  Term o;
  Term g;

  auto operator<=>(const Quad&) const = default;
  bool operator==(const Quad&) const = default;
};

// Subject is an IRI or blank node, predicate and graph are IRIs, all terms valid.
bool isValidQuad(const Quad& q);

struct QuadPattern {
  std::optional<Term> s;
  std::optional<Term> p;
  std::optional<Term> o;
  std::optional<Term> g;

  bool matches(const Quad& q) const;
};

struct NQuadsError {
  std::size_t line = 0;  // 1-based
  std::string message;
};

struct NQuadsParseResult {
  std::vector<Quad> quads;
  std::optional<NQuadsError> error;
};

// One quad per line; `#` comments and blank lines are skipped. The graph
// position is mandatory.
NQuadsParseResult parseNQuads(std::string_view text);
std::string toNQuadsLine(const Quad& q);

class QuadStore {
 public:
  using Id = std::uint32_t;
  static constexpr Id kMaxId = UINT32_MAX;

  struct IdQuad {
    Id s, p, o, g;
  };

  // Returns true if the quad was not present. Throws std::invalid_argument on
  // an invalid quad.
  bool insert(const Quad& q);
  bool remove(const Quad& q);
  bool contains(const Quad& q) const;
  std::size_t dropGraph(const Term& graph);
  void clear();

  std::vector<Quad> match(const QuadPattern& pattern) const;
  std::size_t size() const { return spog_.size(); }
  bool empty() const { return spog_.empty(); }

  // Distinct graph names currently holding at least one quad, sorted.
  std::vector<Term> graphs() const;

  // Canonical N-Quads: lines sorted by the (g, s, p, o) surface strings.
  std::string exportNQuads() const;
  // All-or-nothing bulk insert; the store is unchanged on error.
  std::optional<NQuadsError> importNQuads(std::string_view text);

  // Id-level access for evaluators.
  std::optional<Id> idOf(const Term& t) const;
  const Term& term(Id id) const { return terms_[id]; }

  // Calls fn(IdQuad) for every quad matching the concrete ids; unset
  // positions are wildcards. Uses the index whose key prefix is longest.
  template <typename Fn>
  void forEachMatch(std::optional<Id> s, std::optional<Id> p, std::optional<Id> o,
                    std::optional<Id> g, Fn&& fn) const;

 private:
  using Key = std::array<Id, 4>;
  using Index = std::set<Key>;

  Id intern(const Term& t);
  std::optional<IdQuad> lookup(const Quad& q) const;
  void insertIds(const IdQuad& q);
  void eraseIds(const IdQuad& q);
  Quad decode(const IdQuad& q) const;

  template <typename Fn>
  static void scan(const Index& index, const Key& prefix, std::size_t prefixLen, Fn&& fn);

  std::vector<Term> terms_;
  std::unordered_map<Term, Id, TermHash> ids_;
  Index spog_;  // (s, p, o, g)
  Index posg_;  // (p, o, s, g)
  Index ospg_;  // (o, s, p, g)
  Index gspo_;  // (g, s, p, o)
};

// ____________________________________________________________________________
template <typename Fn>
void QuadStore::scan(const Index& index, const Key& prefix, std::size_t prefixLen, Fn&& fn) {
  Key lo{0, 0, 0, 0};
  for (std::size_t i = 0; i < prefixLen; ++i) lo[i] = prefix[i];
  for (auto it = index.lower_bound(lo); it != index.end(); ++it) {
    for (std::size_t i = 0; i < prefixLen; ++i) {
      if ((*it)[i] != prefix[i]) return;
    }
    fn(*it);
  }
}

template <typename Fn>
void QuadStore::forEachMatch(std::optional<Id> s, std::optional<Id> p,
                             std::optional<Id> o, std::optional<Id> g, Fn&& fn) const {
  auto check = [&](const IdQuad& q) {
    if (s && q.s != *s) return;
    if (p && q.p != *p) return;
    if (o && q.o != *o) return;
    if (g && q.g != *g) return;
    fn(q);
  };
  if (s) {
    Key prefix{*s, p.value_or(0), p && o ? *o : 0, 0};
    std::size_t len = 1 + (p ? 1 + (o ? 1 : 0) : 0);
    scan(spog_, prefix, len, [&](const Key& k) { check({k[0], k[1], k[2], k[3]}); });
  } else if (p) {
    Key prefix{*p, o.value_or(0), 0, 0};
    scan(posg_, prefix, o ? 2 : 1, [&](const Key& k) { check({k[2], k[0], k[1], k[3]}); });
  } else if (o) {
    Key prefix{*o, 0, 0, 0};
    scan(ospg_, prefix, 1, [&](const Key& k) { check({k[1], k[2], k[0], k[3]}); });
  } else if (g) {
    Key prefix{*g, 0, 0, 0};
    scan(gspo_, prefix, 1, [&](const Key& k) { check({k[1], k[2], k[3], k[0]}); });
  } else {
    for (const Key& k : spog_) fn(IdQuad{k[0], k[1], k[2], k[3]});
  }
}

}  // namespace wikibridge
