#include "wikibridge/semantics.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>

#include "wikibridge/vocabulary.hpp"

namespace wikibridge {

const Term* LoweringResult::subjectOf(const Span& nodeSpan) const {
  for (const auto& [span, term] : nodeMap) {
    if (span == nodeSpan) return &term;
  }
  return nullptr;
}

std::string_view violationKindName(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::UndefinedTerm: return "UndefinedTerm";
    case ViolationKind::DomainViolation: return "DomainViolation";
    case ViolationKind::RangeViolation: return "RangeViolation";
    case ViolationKind::DatatypeViolation: return "DatatypeViolation";
    case ViolationKind::CardinalityViolation: return "CardinalityViolation";
    case ViolationKind::NAryArity: return "NAryArity";
    case ViolationKind::RuleViolation: return "RuleViolation";
  }
  return "UndefinedTerm";
}

// ____________________________________________________________________________
namespace {

const Term& rdfType() {
  static const Term kType = Term::iri(std::string(vocab::kRdfType));
  return kType;
}

class Lowerer {
 public:
  Lowerer(const ParsedPage& parsed, long revision)
      : page_(Term::iri(vocab::pageIri(parsed.source.ns, parsed.source.title))) {
    result_.graph =
        Term::iri(vocab::revisionGraphIri(parsed.source.ns, parsed.source.title, revision));
  }

  LoweringResult run(const ParsedPage& parsed) {
    for (const auto& node : parsed.annotations) {
      if (node.kind == AnnotationKind::Simple) {
        result_.nodeMap.emplace_back(node.span, page_);
        lowerPairs(node, page_);
      } else {
        Term n = fresh();
        result_.nodeMap.emplace_back(node.span, n);
        emit(page_, Term::iri(vocab::relIri(node.relation)), n);
        emit(n, rdfType(), Term::iri(vocab::ontoIri(node.relation)));
        lowerPairs(node, n);
      }
    }
    return std::move(result_);
  }

 private:
  Term fresh() { return Term::blank("a" + std::to_string(++blanks_)); }

  void emit(const Term& s, const Term& p, const Term& o) {
    result_.quads.push_back({s, p, o, result_.graph});
  }

  void lowerPairs(const AnnotationNode& node, const Term& subject) {
    for (const auto& pair : node.pairs) {
      bool isType = pair.key == "type";
      Term predicate = isType ? rdfType() : Term::iri(vocab::ontoIri(pair.key));
      if (auto* lit = std::get_if<LiteralValue>(&pair.value)) {
        if (isType) {
          emit(subject, predicate, Term::iri(vocab::ontoIri(lit->lexical)));
        } else {
          emit(subject, predicate, Term::literal(lit->lexical, lit->datatype));
        }
      } else if (auto* ref = std::get_if<PageRef>(&pair.value)) {
        emit(subject, predicate,
             Term::iri(vocab::pageIri(vocab::kDefaultNamespace, ref->title)));
      } else {
        const AnnotationNode& inner = std::get<Nested>(pair.value).node();
        Term n = fresh();
        result_.nodeMap.emplace_back(inner.span, n);
        emit(subject, predicate, n);
        if (inner.kind == AnnotationKind::NAry) {
          emit(n, rdfType(), Term::iri(vocab::ontoIri(inner.relation)));
        }
        lowerPairs(inner, n);
      }
    }
  }

  Term page_;
  LoweringResult result_;
  int blanks_ = 0;
};

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

LoweringResult lowerPage(const ParsedPage& parsed, long revision, std::string_view author,
                         std::string_view timestamp) {
  LoweringResult result = Lowerer(parsed, revision).run(parsed);
  if (!parsed.annotations.empty()) {
    Term meta = Term::iri(vocab::metaGraphIri());
    Term page = Term::iri(vocab::pageIri(parsed.source.ns, parsed.source.title));
    const Term& g = result.graph;
    result.metaQuads = {
        {g, Term::iri(vocab::metaPredicateIri("fromPage")), page, meta},
        {g, Term::iri(vocab::metaPredicateIri("revision")),
         Term::literal(std::to_string(revision), Datatype::Integer), meta},
        {g, Term::iri(vocab::metaPredicateIri("author")), Term::literal(std::string(author)),
         meta},
        {g, Term::iri(vocab::metaPredicateIri("timestamp")),
         Term::literal(std::string(timestamp)), meta},
    };
  }
  return result;
}

std::string blankScope(std::string_view ns, std::string_view title) {
  std::string key(ns);
  key.push_back('\x1f');
  key += title;
  char buf[24];
  std::snprintf(buf, sizeof buf, "b%016llx_", static_cast<unsigned long long>(fnv1a(key)));
  return buf;
}

std::vector<Quad> scopeBlankNodes(std::vector<Quad> quads, std::string_view scope) {
  auto fix = [&](Term& t) {
    if (t.isBlank()) t.value.insert(0, scope);
  };
  for (auto& q : quads) {
    fix(q.s);
    fix(q.o);
  }
  return quads;
}

// ____________________________________________________________________________
std::vector<Quad> rdfsClosure(const std::vector<Quad>& quads, const Ontology& ontology) {
  std::set<std::tuple<Term, Term>> asserted;  // (subject, class IRI) of input rdf:type triples
  for (const auto& q : quads) {
    if (q.p == rdfType()) asserted.insert({q.s, q.o});
  }
  const Term inferred = Term::iri(vocab::inferredGraphIri());
  std::set<Quad> out;
  for (const auto& [subject, cls] : asserted) {
    if (!cls.isIri()) continue;
    auto name = vocab::ontoName(cls.value);
    if (!name || !ontology.hasClass(*name)) continue;
    for (const auto& super : ontology.superclasses(*name)) {
      Term target = Term::iri(vocab::ontoIri(super));
      if (asserted.count({subject, target})) continue;
      out.insert({subject, rdfType(), std::move(target), inferred});
    }
  }
  return {out.begin(), out.end()};
}

std::vector<Quad> rdfsClosure(const QuadStore& store, const Ontology& ontology) {
  std::vector<Quad> typeQuads;
  auto typeId = store.idOf(rdfType());
  if (!typeId) return {};
  std::unordered_map<QuadStore::Id, bool> revisionGraph;
  store.forEachMatch(std::nullopt, typeId, std::nullopt, std::nullopt,
                     [&](const QuadStore::IdQuad& q) {
                       auto [it, fresh] = revisionGraph.try_emplace(q.g, false);
                       if (fresh) it->second = vocab::isRevisionGraph(store.term(q.g).value);
                       if (!it->second) return;
                       typeQuads.push_back(
                           {store.term(q.s), store.term(q.p), store.term(q.o), store.term(q.g)});
                     });
  return rdfsClosure(typeQuads, ontology);
}

// ____________________________________________________________________________
namespace {

struct Triple {
  Term s, p, o;
};

using Binding = std::map<std::string, Term>;

// Facts visible to one page check: the page's own lowering and its closure,
// plus every other page's revision graph and inferred statements.
class FactView {
 public:
  FactView(const QuadStore* store, const LoweringResult& lowered, const Ontology& ontology,
           const ParsedPage& parsed)
      : store_(store) {
    for (const auto& q : lowered.quads) local_.push_back({q.s, q.p, q.o});
    for (const auto& q : rdfsClosure(lowered.quads, ontology)) local_.push_back({q.s, q.p, q.o});
    ownGraphPrefix_ = std::string(vocab::kBase) + "graph/" +
                      vocab::pageKey(parsed.source.ns, parsed.source.title) + "/";
    ownPage_ = Term::iri(vocab::pageIri(parsed.source.ns, parsed.source.title));
    ownScope_ = blankScope(parsed.source.ns, parsed.source.title);
    if (store_) inferredId_ = store_->idOf(Term::iri(vocab::inferredGraphIri()));
  }

  template <typename Fn>
  void match(const Term* s, const Term* p, const Term* o, Fn&& fn) const {
    for (const auto& t : local_) {
      if ((s && t.s != *s) || (p && t.p != *p) || (o && t.o != *o)) continue;
      fn(t);
    }
    if (!store_) return;
    std::optional<QuadStore::Id> sid, pid, oid;
    if (s && !(sid = store_->idOf(*s))) return;
    if (p && !(pid = store_->idOf(*p))) return;
    if (o && !(oid = store_->idOf(*o))) return;
    store_->forEachMatch(sid, pid, oid, std::nullopt, [&](const QuadStore::IdQuad& q) {
      if (!visible(q)) return;
      fn(Triple{store_->term(q.s), store_->term(q.p), store_->term(q.o)});
    });
  }

  bool holds(const Term& s, const Term& p, const Term& o) const {
    bool found = false;
    match(&s, &p, &o, [&](const Triple&) { found = true; });
    return found;
  }

  // Ontology names x is typed with (classes and relations).
  std::set<std::string> typesOf(const Term& x) const {
    std::set<std::string> out;
    match(&x, &rdfType(), nullptr, [&](const Triple& t) {
      if (!t.o.isIri()) return;
      if (auto name = vocab::ontoName(t.o.value)) out.insert(*name);
    });
    return out;
  }

 private:
  bool visible(const QuadStore::IdQuad& q) const {
    auto [it, fresh] = graphVisible_.try_emplace(q.g, false);
    if (fresh) {
      const std::string& g = store_->term(q.g).value;
      it->second = vocab::isRevisionGraph(g) && !g.starts_with(ownGraphPrefix_);
    }
    if (it->second) return true;
    if (inferredId_ && q.g == *inferredId_) {
      const Term& s = store_->term(q.s);
      if (s == ownPage_) return false;
      return !(s.isBlank() && s.value.starts_with(ownScope_));
    }
    return false;
  }

  const QuadStore* store_;
  std::vector<Triple> local_;
  std::string ownGraphPrefix_;
  Term ownPage_;
  std::string ownScope_;
  std::optional<QuadStore::Id> inferredId_;
  mutable std::unordered_map<QuadStore::Id, bool> graphVisible_;
};

const Term* bound(const Operand& op, const Binding& b) {
  if (auto* v = std::get_if<Variable>(&op)) {
    auto it = b.find(v->name);
    return it == b.end() ? nullptr : &it->second;
  }
  return &std::get<Term>(op);
}

// Backtracking join; `emit` returns true to stop the search.
bool join(const FactView& facts, const std::vector<TriplePattern>& patterns,
          std::vector<bool>& used, Binding& binding,
          const std::function<bool(const Binding&)>& emit) {
  int best = -1;
  int bestBound = -1;
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    if (used[i]) continue;
    int n = (bound(patterns[i].s, binding) != nullptr) + (bound(patterns[i].p, binding) != nullptr) +
            (bound(patterns[i].o, binding) != nullptr);
    if (n > bestBound) {
      best = static_cast<int>(i);
      bestBound = n;
    }
  }
  if (best < 0) return emit(binding);
  const TriplePattern& pat = patterns[best];
  used[best] = true;
  bool stop = false;
  std::vector<Triple> candidates;
  facts.match(bound(pat.s, binding), bound(pat.p, binding), bound(pat.o, binding),
              [&](const Triple& t) { candidates.push_back(t); });
  for (const auto& t : candidates) {
    std::vector<std::string> added;
    bool ok = true;
    for (auto [op, value] : {std::pair{&pat.s, &t.s}, {&pat.p, &t.p}, {&pat.o, &t.o}}) {
      auto* v = std::get_if<Variable>(op);
      if (!v) continue;
      auto it = binding.find(v->name);
      if (it == binding.end()) {
        binding.emplace(v->name, *value);
        added.push_back(v->name);
      } else if (it->second != *value) {
        ok = false;
        break;
      }
    }
    if (ok) stop = join(facts, patterns, used, binding, emit);
    for (const auto& name : added) binding.erase(name);
    if (stop) break;
  }
  used[best] = false;
  return stop;
}

class Checker {
 public:
  Checker(const ParsedPage& parsed, const LoweringResult& lowered, const Ontology& ontology,
          const QuadStore* context)
      : parsed_(parsed),
        lowered_(lowered),
        ont_(ontology),
        facts_(context, lowered, ontology, parsed) {}

  std::vector<Violation> run() {
    for (const auto& node : parsed_.annotations) {
      checkNode(node, *lowered_.subjectOf(node.span));
    }
    checkCardinality();
    checkRules();
    std::sort(out_.begin(), out_.end(), [](const Violation& a, const Violation& b) {
      return std::tie(a.span, a.kind, a.detail, a.subject) <
             std::tie(b.span, b.kind, b.detail, b.subject);
    });
    return std::move(out_);
  }

 private:
  void report(ViolationKind kind, const Term& subject, std::string detail, const Span& span,
              std::optional<std::string> rule = std::nullopt) {
    out_.push_back({kind, subject, std::move(detail), std::move(rule), span});
  }

  // True iff some type of x conforms to `target` (a class, via the subclass
  // hierarchy, or a relation name).
  bool conformsTo(const std::set<std::string>& types, const std::string& target) const {
    if (ont_.relation(target)) return types.count(target) > 0;
    if (!ont_.hasClass(target)) return false;
    return std::any_of(types.begin(), types.end(), [&](const std::string& t) {
      return ont_.hasClass(t) && ont_.isSubclassOf(t, target);
    });
  }

  static std::string describeTypes(const std::set<std::string>& types) {
    std::string out;
    for (const auto& t : types) out += (out.empty() ? "" : ", ") + t;
    return "{" + out + "}";
  }

  void checkNode(const AnnotationNode& node, const Term& subject) {
    if (node.kind == AnnotationKind::NAry) {
      checkNAry(node, subject);
    } else {
      checkSimple(node, subject);
    }
    for (const auto& pair : node.pairs) {
      if (auto* nested = std::get_if<Nested>(&pair.value)) {
        checkNode(nested->node(), *lowered_.subjectOf(nested->node().span));
      }
    }
  }

  void checkTypePair(const Pair& pair, const Term& subject) {
    auto* lit = std::get_if<LiteralValue>(&pair.value);
    if (!lit) {
      report(ViolationKind::UndefinedTerm, subject, "'type' must name a class", pair.span);
    } else if (!ont_.hasClass(lit->lexical)) {
      report(ViolationKind::UndefinedTerm, subject, "undefined class '" + lit->lexical + "'",
             pair.span);
    }
  }

  // Checks a value against a property range or role filler.
  void checkValue(const Pair& pair, const Term& subject, const std::string& expected,
                  const std::string& what) {
    if (auto dt = datatypeFromName(expected)) {
      auto* lit = std::get_if<LiteralValue>(&pair.value);
      if (!lit) {
        report(ViolationKind::DatatypeViolation, subject,
               what + " expects a " + expected + " literal, got a resource", pair.span);
        return;
      }
      bool sameType = lit->datatype == *dt ||
                      (*dt == Datatype::Decimal && lit->datatype == Datatype::Integer);
      if (!sameType || !isValidLexical(lit->datatype, lit->lexical)) {
        report(ViolationKind::DatatypeViolation, subject,
               what + " expects " + expected + ", got " +
                   std::string(datatypeName(lit->datatype)) + " \"" + lit->lexical + "\"",
               pair.span);
      }
      return;
    }
    std::optional<Term> target;
    if (auto* ref = std::get_if<PageRef>(&pair.value)) {
      target = Term::iri(vocab::pageIri(vocab::kDefaultNamespace, ref->title));
    } else if (auto* nested = std::get_if<Nested>(&pair.value)) {
      target = *lowered_.subjectOf(nested->node().span);
    }
    if (!target) {
      report(ViolationKind::RangeViolation, subject,
             what + " expects a resource of type " + expected + ", got a literal", pair.span);
      return;
    }
    auto types = facts_.typesOf(*target);
    if (!conformsTo(types, expected)) {
      report(ViolationKind::RangeViolation, subject,
             what + " expects a resource of type " + expected + ", target " +
                 toNTriples(*target) + (types.empty() ? " is untyped" : " has types " +
                                                                         describeTypes(types)),
             pair.span);
    }
  }

  void checkSimple(const AnnotationNode& node, const Term& subject) {
    for (const auto& pair : node.pairs) {
      if (pair.key == "type") {
        checkTypePair(pair, subject);
        continue;
      }
      const PropertyDecl* prop = ont_.property(pair.key);
      if (!prop) {
        report(ViolationKind::UndefinedTerm, subject, "undefined property '" + pair.key + "'",
               pair.span);
        continue;
      }
      auto types = facts_.typesOf(subject);
      if (types.empty()) {
        report(ViolationKind::DomainViolation, subject,
               "untyped subject; '" + pair.key + "' requires " + prop->domain, pair.span);
      } else if (!conformsTo(types, prop->domain)) {
        report(ViolationKind::DomainViolation, subject,
               "'" + pair.key + "' requires " + prop->domain + ", subject has types " +
                   describeTypes(types),
               pair.span);
      }
      checkValue(pair, subject, prop->range, "property '" + pair.key + "'");
      uses_[subject].push_back({pair.key, pair.span});
    }
  }

  void checkNAry(const AnnotationNode& node, const Term& subject) {
    const RelationSchema* rel = ont_.relation(node.relation);
    if (!rel) {
      report(ViolationKind::UndefinedTerm, subject, "undefined relation '" + node.relation + "'",
             node.span);
      for (const auto& pair : node.pairs) {
        if (pair.key == "type") checkTypePair(pair, subject);
      }
      return;
    }
    std::set<std::string> filled;
    for (const auto& pair : node.pairs) {
      if (pair.key == "type") {
        checkTypePair(pair, subject);
        continue;
      }
      const RoleDecl* role = rel->role(pair.key);
      if (!role) {
        report(ViolationKind::UndefinedTerm, subject,
               "relation '" + rel->name + "' has no role '" + pair.key + "'", pair.span);
        continue;
      }
      filled.insert(role->name);
      checkValue(pair, subject, role->filler, "role '" + rel->name + "." + role->name + "'");
    }
    std::string problems;
    if (filled.size() < 2) {
      problems = std::to_string(filled.size()) + " filled role(s), at least 2 required";
    }
    for (const auto& role : rel->roles) {
      if (role.required && !filled.count(role.name)) {
        problems += (problems.empty() ? "" : "; ") + std::string("missing required role '") +
                    role.name + "'";
      }
    }
    if (!problems.empty()) {
      report(ViolationKind::NAryArity, subject, "relation '" + rel->name + "': " + problems,
             node.span);
    }
  }

  void checkCardinality() {
    std::vector<Term> subjects;
    for (const auto& [span, term] : lowered_.nodeMap) {
      if (std::find(subjects.begin(), subjects.end(), term) == subjects.end()) {
        subjects.push_back(term);
      }
    }
    for (const auto& subject : subjects) {
      auto types = facts_.typesOf(subject);
      const Span& introduced = firstSpanOf(subject);
      for (const auto& [name, prop] : ont_.properties()) {
        if (prop.minCard == 0 && !prop.maxCard) continue;
        if (!conformsTo(types, prop.domain)) continue;
        Term predicate = Term::iri(vocab::ontoIri(name));
        std::set<Term> values;
        for (const auto& q : lowered_.quads) {
          if (q.s == subject && q.p == predicate) values.insert(q.o);
        }
        std::size_t count = values.size();
        if (count < prop.minCard) {
          report(ViolationKind::CardinalityViolation, subject,
                 "'" + name + "' occurs " + std::to_string(count) + " time(s), min " +
                     std::to_string(prop.minCard),
                 introduced);
        } else if (prop.maxCard && count > *prop.maxCard) {
          std::vector<Span> spans;
          for (const auto& [key, span] : uses_[subject]) {
            if (key == name) spans.push_back(span);
          }
          Span at = spans.size() > *prop.maxCard ? spans[*prop.maxCard] : introduced;
          report(ViolationKind::CardinalityViolation, subject,
                 "'" + name + "' occurs " + std::to_string(count) + " time(s), max " +
                     std::to_string(*prop.maxCard),
                 at);
        }
      }
    }
  }

  const Span& firstSpanOf(const Term& subject) const {
    for (const auto& [span, term] : lowered_.nodeMap) {
      if (term == subject) return span;
    }
    static const Span kNone{};
    return kNone;
  }

  void checkRules() {
    std::set<Term> pageSubjects;
    for (const auto& [span, term] : lowered_.nodeMap) pageSubjects.insert(term);
    if (pageSubjects.empty()) return;
    for (const auto& rule : ont_.rules()) {
      std::vector<std::string> order;  // body variables by first appearance
      for (const auto& p : rule.body) {
        for (const Operand* op : {&p.s, &p.p, &p.o}) {
          if (auto* v = std::get_if<Variable>(op)) {
            if (std::find(order.begin(), order.end(), v->name) == order.end()) {
              order.push_back(v->name);
            }
          }
        }
      }
      std::set<Binding> solutions;
      std::vector<bool> used(rule.body.size(), false);
      Binding binding;
      join(facts_, rule.body, used, binding, [&](const Binding& b) {
        solutions.insert(b);
        return false;
      });
      for (const auto& mu : solutions) {
        const Term* anchor = nullptr;
        for (const auto& var : order) {
          if (pageSubjects.count(mu.at(var))) {
            anchor = &mu.at(var);
            break;
          }
        }
        if (!anchor) continue;
        auto lookup = [&](const std::string& v) -> const Term* {
          auto it = mu.find(v);
          return it == mu.end() ? nullptr : &it->second;
        };
        bool passes = std::all_of(rule.filters.begin(), rule.filters.end(), [&](const auto& f) {
          return evaluateFilter(f, lookup) == Truth::True;
        });
        if (!passes) continue;
        std::vector<bool> headUsed(rule.head.size(), false);
        Binding extended = mu;
        bool satisfied = join(facts_, rule.head, headUsed, extended,
                              [](const Binding&) { return true; });
        if (satisfied) continue;
        std::string detail;
        for (const auto& var : order) {
          detail += (detail.empty() ? "" : ", ") + ("?" + var) + "=" + toNTriples(mu.at(var));
        }
        report(ViolationKind::RuleViolation, *anchor, detail, firstSpanOf(*anchor), rule.name);
      }
    }
  }

  const ParsedPage& parsed_;
  const LoweringResult& lowered_;
  const Ontology& ont_;
  FactView facts_;
  std::vector<Violation> out_;
  std::map<Term, std::vector<std::pair<std::string, Span>>> uses_;
};

}  // namespace

ValidationReport checkPage(const ParsedPage& parsed, const LoweringResult& lowered,
                           const Ontology& ontology, const QuadStore* context,
                           std::string_view checkedAt) {
  ValidationReport report;
  report.page = parsed.source.title;
  report.ns = parsed.source.ns;
  auto revision = [&] {
    // The revision number is the last segment of the graph IRI.
    const std::string& g = lowered.graph.value;
    auto slash = g.rfind('/');
    return slash == std::string::npos ? 0L : std::stol(g.substr(slash + 1));
  };
  report.revision = revision();
  report.checkedAt = std::string(checkedAt);
  report.ontologyHash = ontology.contentHash();
  report.violations = Checker(parsed, lowered, ontology, context).run();
  return report;
}

ValidationReport parseFailureReport(const PageSource& source, long revision,
                                    std::vector<ParseDiagnostic> diagnostics,
                                    std::string_view checkedAt) {
  ValidationReport report;
  report.page = source.title;
  report.ns = source.ns;
  report.revision = revision;
  report.checkedAt = std::string(checkedAt);
  report.diagnostics = std::move(diagnostics);
  return report;
}

}  // namespace wikibridge
