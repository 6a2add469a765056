#include "wikibridge/ontology.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <deque>

#include "syntax.hpp"
#include "wikibridge/markup.hpp"
#include "wikibridge/text.hpp"
#include "wikibridge/vocabulary.hpp"

namespace wikibridge {

const RoleDecl* RelationSchema::role(std::string_view roleName) const {
  for (const auto& r : roles) {
    if (r.name == roleName) return &r;
  }
  return nullptr;
}

// ____________________________________________________________________________
bool Ontology::hasClass(std::string_view name) const {
  return classes_.find(std::string(name)) != classes_.end();
}

const PropertyDecl* Ontology::property(std::string_view name) const {
  auto it = properties_.find(std::string(name));
  return it == properties_.end() ? nullptr : &it->second;
}

const RelationSchema* Ontology::relation(std::string_view name) const {
  auto it = relations_.find(std::string(name));
  return it == relations_.end() ? nullptr : &it->second;
}

const std::set<std::string>& Ontology::superclasses(std::string_view name) const {
  auto it = ancestors_.find(name);
  if (it == ancestors_.end()) throw UnknownClassError(std::string(name));
  return it->second;
}

bool Ontology::isSubclassOf(std::string_view sub, std::string_view super) const {
  if (!hasClass(super)) throw UnknownClassError(std::string(super));
  const auto& up = superclasses(sub);
  return up.find(std::string(super)) != up.end();
}

LookupResult Ontology::lookup(std::string_view name) const {
  if (hasClass(name)) return ClassRef{std::string(name)};
  if (const auto* p = property(name)) return *p;
  if (const auto* r = relation(name)) return *r;
  return NotFound{};
}

void Ontology::computeClosure() {
  std::map<std::string, std::vector<std::string>> up;
  for (const auto& [sub, super] : subclassEdges_) up[sub].push_back(super);
  ancestors_.clear();
  for (const auto& cls : classes_) {
    std::set<std::string> seen{cls};
    std::deque<std::string> queue{cls};
    while (!queue.empty()) {
      std::string cur = std::move(queue.front());
      queue.pop_front();
      for (const auto& next : up[cur]) {
        if (seen.insert(next).second) queue.push_back(next);
      }
    }
    ancestors_.emplace(cls, std::move(seen));
  }
}

bool Ontology::operator==(const Ontology& other) const {
  return classes_ == other.classes_ && subclassEdges_ == other.subclassEdges_ &&
         properties_ == other.properties_ && relations_ == other.relations_ &&
         rules_ == other.rules_;
}

std::string Ontology::contentHash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : renderOntology(*this)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string_view ontologyErrorKindName(OntologyErrorKind kind) {
  switch (kind) {
    case OntologyErrorKind::SyntaxError: return "SyntaxError";
    case OntologyErrorKind::UndefinedReference: return "UndefinedReference";
    case OntologyErrorKind::DuplicateDeclaration: return "DuplicateDeclaration";
    case OntologyErrorKind::BadCardinality: return "BadCardinality";
  }
  return "SyntaxError";
}

// ____________________________________________________________________________
class OntologyLoader {
 public:
  OntologyLoadResult load(std::string_view text) {
    splitLines(text);
    for (std::size_t i = 0; i < lines_.size(); ++i) {
      std::string_view line = trim(lines_[i]);
      if (line.empty() || line.front() == '#') continue;
      std::size_t lineNo = i + 1;
      auto words = splitWords(line);
      if (words[0] == "rule") {
        i = collectRule(i);
        continue;
      }
      if (words[0] == "role") {
        parseRole(words, lineNo);
        continue;
      }
      currentRelation_.reset();
      if (words[0] == "class") {
        parseClass(words, lineNo);
      } else if (words[0] == "property") {
        parseProperty(words, 1, std::nullopt, lineNo);
      } else if ((words[0] == "object" || words[0] == "datatype") && words.size() > 1 &&
                 words[1] == "property") {
        parseProperty(words, 2,
                      words[0] == "object" ? PropertyKind::Object : PropertyKind::Data,
                      lineNo);
      } else if (words[0] == "relation") {
        parseRelation(words, lineNo);
      } else {
        error(OntologyErrorKind::SyntaxError, lineNo, words[0],
              "unknown declaration '" + words[0] + "'");
      }
    }
    resolve();
    OntologyLoadResult result;
    result.errors = std::move(errors_);
    if (result.errors.empty()) {
      ont_.computeClosure();
      result.ontology = std::move(ont_);
    }
    return result;
  }

 private:
  struct PendingProperty {
    PropertyDecl decl;
    std::optional<PropertyKind> declaredKind;
    std::size_t line;
  };
  struct PendingRelation {
    RelationSchema schema;
    std::size_t line;
  };
  struct PendingRule {
    ConstraintRule rule;
    std::size_t line;
  };

  void error(OntologyErrorKind kind, std::size_t line, std::string name, std::string msg) {
    errors_.push_back({kind, line, std::move(name), std::move(msg)});
  }

  void splitLines(std::string_view text) {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t eol = text.find('\n', pos);
      if (eol == std::string_view::npos) eol = text.size();
      lines_.emplace_back(text.substr(pos, eol - pos));
      pos = eol + 1;
    }
  }

  // Whitespace-separated words; ',' and ':' are words of their own.
  static std::vector<std::string> splitWords(std::string_view line) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    };
    for (char c : line) {
      if (c == '#') break;
      if (isSpace(c)) {
        flush();
      } else if (c == ',' || c == ':') {
        flush();
        out.emplace_back(1, c);
      } else {
        cur.push_back(c);
      }
    }
    flush();
    return out;
  }

  bool declareName(const std::string& name, std::size_t line) {
    if (!isIdentifier(name)) {
      error(OntologyErrorKind::SyntaxError, line, name, "'" + name + "' is not a valid name");
      return false;
    }
    if (datatypeFromName(name)) {
      error(OntologyErrorKind::SyntaxError, line, name,
            "'" + name + "' is a reserved datatype name");
      return false;
    }
    if (!declared_.insert(name).second) {
      error(OntologyErrorKind::DuplicateDeclaration, line, name,
            "'" + name + "' is declared more than once");
      return false;
    }
    return true;
  }

  void parseClass(const std::vector<std::string>& w, std::size_t line) {
    if (w.size() < 2) {
      error(OntologyErrorKind::SyntaxError, line, "", "class needs a name");
      return;
    }
    const std::string& name = w[1];
    if (!declareName(name, line)) return;
    ont_.classes_.insert(name);
    if (w.size() == 2) return;
    if (w[2] != "subclassof" || w.size() == 3) {
      error(OntologyErrorKind::SyntaxError, line, name, "expected 'subclassof A, B, ...'");
      return;
    }
    bool expectName = true;
    for (std::size_t i = 3; i < w.size(); ++i) {
      if (expectName && w[i] != ",") {
        pendingEdges_.push_back({name, w[i], line});
        expectName = false;
      } else if (!expectName && w[i] == ",") {
        expectName = true;
      } else {
        error(OntologyErrorKind::SyntaxError, line, name, "malformed superclass list");
        return;
      }
    }
    if (expectName) error(OntologyErrorKind::SyntaxError, line, name, "dangling ','");
  }

  void parseProperty(const std::vector<std::string>& w, std::size_t at,
                     std::optional<PropertyKind> kind, std::size_t line) {
    // <name> domain <C> range <R> [min k] [max k]
    if (w.size() < at + 5 || w[at + 1] != "domain" || w[at + 3] != "range") {
      error(OntologyErrorKind::SyntaxError, line, w.size() > at ? w[at] : "",
            "expected 'property <name> domain <Class> range <Class|datatype>'");
      return;
    }
    PendingProperty p{{}, kind, line};
    p.decl.name = w[at];
    p.decl.domain = w[at + 2];
    p.decl.range = w[at + 4];
    bool sawMin = false;
    bool sawMax = false;
    for (std::size_t i = at + 5; i < w.size(); i += 2) {
      bool isMin = w[i] == "min";
      if ((!isMin && w[i] != "max") || i + 1 >= w.size() || !isIntegerLexical(w[i + 1]) ||
          w[i + 1][0] == '-' || w[i + 1][0] == '+' || (isMin ? sawMin : sawMax)) {
        error(OntologyErrorKind::SyntaxError, line, p.decl.name,
              "expected 'min <k>' or 'max <k>' with a nonnegative integer");
        return;
      }
      std::size_t k = std::stoull(w[i + 1]);
      if (isMin) {
        p.decl.minCard = k;
        sawMin = true;
      } else {
        p.decl.maxCard = k;
        sawMax = true;
      }
    }
    if (!declareName(p.decl.name, line)) return;
    if (p.decl.maxCard && *p.decl.maxCard == 0) {
      error(OntologyErrorKind::BadCardinality, line, p.decl.name, "max must be positive");
      return;
    }
    if (p.decl.maxCard && p.decl.minCard > *p.decl.maxCard) {
      error(OntologyErrorKind::BadCardinality, line, p.decl.name, "min exceeds max");
      return;
    }
    pendingProperties_.push_back(std::move(p));
  }

  void parseRelation(const std::vector<std::string>& w, std::size_t line) {
    if (w.size() != 2) {
      error(OntologyErrorKind::SyntaxError, line, "",
            "expected 'relation <Name>' followed by role lines");
      return;
    }
    if (!declareName(w[1], line)) return;
    pendingRelations_.push_back({{w[1], {}}, line});
    currentRelation_ = pendingRelations_.size() - 1;
  }

  void parseRole(const std::vector<std::string>& w, std::size_t line) {
    if (!currentRelation_) {
      error(OntologyErrorKind::SyntaxError, line, "", "role line outside a relation");
      return;
    }
    // role <name> : <filler> [required]
    bool shapeOk = (w.size() == 4 || (w.size() == 5 && w[4] == "required")) && w[2] == ":";
    if (!shapeOk || !isIdentifier(w[1])) {
      error(OntologyErrorKind::SyntaxError, line, "",
            "expected 'role <name> : <filler> [required]'");
      return;
    }
    auto& schema = pendingRelations_[*currentRelation_].schema;
    if (schema.role(w[1])) {
      error(OntologyErrorKind::DuplicateDeclaration, line, w[1],
            "role '" + w[1] + "' repeated in relation " + schema.name);
      return;
    }
    schema.roles.push_back({w[1], w[3], w.size() == 5});
    roleLines_[{schema.name, w[1]}] = line;
  }

  // Rules may span several lines; returns the index of the last line consumed.
  std::size_t collectRule(std::size_t first) {
    std::string chunk;
    int depth = 0;
    int closedBlocks = 0;
    bool inString = false;
    std::size_t i = first;
    for (; i < lines_.size() && closedBlocks < 2; ++i) {
      if (i > first) chunk.push_back('\n');
      const std::string& line = lines_[i];
      for (std::size_t k = 0; k < line.size() && closedBlocks < 2; ++k) {
        char c = line[k];
        chunk.push_back(c);
        if (inString) {
          if (c == '\\' && k + 1 < line.size()) {
            chunk.push_back(line[++k]);
          } else if (c == '"') {
            inString = false;
          }
          continue;
        }
        if (c == '"') inString = true;
        if (c == '#' && depth == 0) break;
        if (c == '{') ++depth;
        if (c == '}' && --depth == 0) ++closedBlocks;
      }
      if (closedBlocks >= 2) break;
    }
    if (closedBlocks < 2) {
      error(OntologyErrorKind::SyntaxError, first + 1, "",
            "rule must have the form: rule \"name\" when { ... } expect { ... }");
      return lines_.size();
    }
    parseRule(chunk, first + 1);
    return i;
  }

  void parseRule(const std::string& chunk, std::size_t firstLine) {
    auto lineOf = [&](std::size_t offset) {
      return firstLine + std::count(chunk.begin(), chunk.begin() + std::min(offset, chunk.size()),
                                    '\n');
    };
    try {
      auto tokens = detail::tokenize(chunk);
      detail::TokenCursor cur(tokens);
      detail::TermReader reader;
      reader.prefixes = vocab::standardPrefixes();
      reader.resolveWord = [](const std::string& word) -> std::optional<Term> {
        if (!isIdentifier(word)) return std::nullopt;
        return Term::iri(vocab::ontoIri(word));
      };
      if (!cur.acceptWord("rule")) cur.fail("expected 'rule'");
      ConstraintRule rule;
      rule.name = cur.expect(detail::Tok::String, "a quoted rule name").text;
      if (rule.name.empty()) cur.fail("rule name must not be empty");
      if (!cur.acceptWord("when")) cur.fail("expected 'when'");
      cur.expect(detail::Tok::LBrace, "'{'");
      while (!cur.accept(detail::Tok::RBrace)) {
        if (cur.acceptWord("filter")) {
          cur.expect(detail::Tok::LParen, "'('");
          rule.filters.push_back(reader.readFilter(cur));
          cur.expect(detail::Tok::RParen, "')'");
        } else {
          rule.body.push_back(readPattern(cur, reader));
        }
        cur.accept(detail::Tok::Dot);
      }
      if (!cur.acceptWord("expect")) cur.fail("expected 'expect'");
      cur.expect(detail::Tok::LBrace, "'{'");
      while (!cur.accept(detail::Tok::RBrace)) {
        rule.head.push_back(readPattern(cur, reader));
        cur.accept(detail::Tok::Dot);
      }
      if (cur.peek().kind != detail::Tok::End) cur.fail("unexpected text after rule");
      if (rule.body.empty() || rule.head.empty()) {
        throw detail::SyntaxError{0, "rule body and head must each have a pattern"};
      }
      std::set<std::string> bodyVars, filterVars, headVars;
      for (const auto& p : rule.body) collectVariables(p, bodyVars);
      for (const auto& f : rule.filters) collectVariables(f, filterVars);
      for (const auto& p : rule.head) collectVariables(p, headVars);
      for (const auto& v : filterVars) {
        if (!bodyVars.count(v)) {
          throw detail::SyntaxError{0, "filter variable ?" + v + " does not occur in the body"};
        }
      }
      bool shared = std::any_of(headVars.begin(), headVars.end(),
                                [&](const std::string& v) { return bodyVars.count(v) > 0; });
      if (!shared) throw detail::SyntaxError{0, "head shares no variable with the body"};
      if (!ruleNames_.insert(rule.name).second) {
        error(OntologyErrorKind::DuplicateDeclaration, firstLine, rule.name,
              "rule '" + rule.name + "' is declared more than once");
        return;
      }
      pendingRules_.push_back({std::move(rule), firstLine});
    } catch (const detail::SyntaxError& e) {
      error(OntologyErrorKind::SyntaxError, lineOf(e.offset), "", e.message);
    }
  }

  static TriplePattern readPattern(detail::TokenCursor& cur, const detail::TermReader& reader) {
    cur.expect(detail::Tok::LParen, "'(' starting a triple pattern");
    TriplePattern p;
    p.s = reader.readOperand(cur);
    cur.expect(detail::Tok::Comma, "','");
    p.p = reader.readOperand(cur);
    cur.expect(detail::Tok::Comma, "','");
    p.o = reader.readOperand(cur);
    cur.expect(detail::Tok::RParen, "')'");
    if (auto* t = std::get_if<Term>(&p.s); t && t->isLiteral()) {
      cur.fail("pattern subject must not be a literal");
    }
    if (auto* t = std::get_if<Term>(&p.p); t && !t->isIri()) {
      cur.fail("pattern predicate must be an IRI or variable");
    }
    return p;
  }

  bool isDatatype(const std::string& name) const { return datatypeFromName(name).has_value(); }
  bool isClass(const std::string& name) const { return ont_.classes_.count(name) > 0; }
  bool isRelation(const std::string& name) const {
    return std::any_of(pendingRelations_.begin(), pendingRelations_.end(),
                       [&](const PendingRelation& r) { return r.schema.name == name; });
  }
  // Object ranges and role fillers may name a class or a relation; a
  // relation-typed value is a nested n-ary block of that relation.
  bool isResourceType(const std::string& name) const { return isClass(name) || isRelation(name); }

  void resolve() {
    for (const auto& e : pendingEdges_) {
      if (!isClass(e.super)) {
        error(OntologyErrorKind::UndefinedReference, e.line, e.super,
              "undefined class '" + e.super + "'");
      } else {
        ont_.subclassEdges_.insert({e.sub, e.super});
      }
    }
    for (auto& p : pendingProperties_) {
      bool ok = true;
      if (!isClass(p.decl.domain)) {
        error(OntologyErrorKind::UndefinedReference, p.line, p.decl.domain,
              "undefined class '" + p.decl.domain + "'");
        ok = false;
      }
      bool dtRange = isDatatype(p.decl.range);
      if (!dtRange && !isResourceType(p.decl.range)) {
        error(OntologyErrorKind::UndefinedReference, p.line, p.decl.range,
              "undefined class, relation or datatype '" + p.decl.range + "'");
        ok = false;
      } else if (p.declaredKind && (*p.declaredKind == PropertyKind::Data) != dtRange) {
        error(OntologyErrorKind::SyntaxError, p.line, p.decl.name,
              dtRange ? "object property needs a class range"
                      : "datatype property needs a datatype range");
        ok = false;
      }
      if (!ok) continue;
      p.decl.kind = dtRange ? PropertyKind::Data : PropertyKind::Object;
      ont_.properties_.emplace(p.decl.name, std::move(p.decl));
    }
    for (auto& r : pendingRelations_) {
      bool ok = true;
      for (const auto& role : r.schema.roles) {
        if (!isDatatype(role.filler) && !isResourceType(role.filler)) {
          error(OntologyErrorKind::UndefinedReference, roleLines_[{r.schema.name, role.name}],
                role.filler, "undefined class, relation or datatype '" + role.filler + "'");
          ok = false;
        }
      }
      if (r.schema.roles.size() < 2) {
        error(OntologyErrorKind::BadCardinality, r.line, r.schema.name,
              "relation '" + r.schema.name + "' needs at least two roles");
        ok = false;
      }
      if (ok) ont_.relations_.emplace(r.schema.name, std::move(r.schema));
    }
    std::set<std::string> roleNames;
    for (const auto& [name, rel] : ont_.relations_) {
      for (const auto& role : rel.roles) roleNames.insert(role.name);
    }
    for (auto& r : pendingRules_) {
      bool ok = true;
      auto checkTerm = [&](const Operand& op) {
        const Term* t = std::get_if<Term>(&op);
        if (!t || !t->isIri()) return;
        if (auto name = vocab::ontoName(t->value)) {
          bool known = isClass(*name) || ont_.properties_.count(*name) ||
                       ont_.relations_.count(*name) || roleNames.count(*name);
          if (!known) {
            error(OntologyErrorKind::UndefinedReference, r.line, *name,
                  "rule '" + r.rule.name + "' references undefined name '" + *name + "'");
            ok = false;
          }
        }
      };
      for (const auto* list : {&r.rule.body, &r.rule.head}) {
        for (const auto& p : *list) {
          checkTerm(p.s);
          checkTerm(p.p);
          checkTerm(p.o);
        }
      }
      if (ok) ont_.rules_.push_back(std::move(r.rule));
    }
  }

  struct PendingEdge {
    std::string sub;
    std::string super;
    std::size_t line;
  };

  std::vector<std::string> lines_;
  std::vector<OntologyError> errors_;
  Ontology ont_;
  std::set<std::string> declared_;
  std::set<std::string> ruleNames_;
  std::vector<PendingEdge> pendingEdges_;
  std::vector<PendingProperty> pendingProperties_;
  std::vector<PendingRelation> pendingRelations_;
  std::vector<PendingRule> pendingRules_;
  std::map<std::pair<std::string, std::string>, std::size_t> roleLines_;
  std::optional<std::size_t> currentRelation_;
};

OntologyLoadResult loadOntology(std::string_view text) { return OntologyLoader().load(text); }

// ____________________________________________________________________________
namespace {

std::string renderPattern(const TriplePattern& p) {
  return "(" + renderOperand(p.s) + ", " + renderOperand(p.p) + ", " + renderOperand(p.o) + ")";
}

std::string quoteName(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out + "\"";
}

}  // namespace

std::string renderOntology(const Ontology& ontology) {
  std::string out;
  std::map<std::string, std::vector<std::string>> supers;
  for (const auto& [sub, super] : ontology.subclassEdges()) supers[sub].push_back(super);
  for (const auto& cls : ontology.classes()) {
    out += "class " + cls;
    auto it = supers.find(cls);
    if (it != supers.end()) {
      out += " subclassof ";
      for (std::size_t i = 0; i < it->second.size(); ++i) {
        if (i > 0) out += ", ";
        out += it->second[i];
      }
    }
    out += "\n";
  }
  for (const auto& [name, p] : ontology.properties()) {
    out += p.kind == PropertyKind::Object ? "object property " : "datatype property ";
    out += name + " domain " + p.domain + " range " + p.range;
    if (p.minCard > 0) out += " min " + std::to_string(p.minCard);
    if (p.maxCard) out += " max " + std::to_string(*p.maxCard);
    out += "\n";
  }
  for (const auto& [name, rel] : ontology.relations()) {
    out += "relation " + name + "\n";
    for (const auto& role : rel.roles) {
      out += "  role " + role.name + " : " + role.filler;
      if (role.required) out += " required";
      out += "\n";
    }
  }
  for (const auto& rule : ontology.rules()) {
    out += "rule " + quoteName(rule.name) + " when {";
    for (const auto& p : rule.body) out += " " + renderPattern(p);
    for (const auto& f : rule.filters) out += " filter(" + renderFilter(f) + ")";
    out += " } expect {";
    for (const auto& p : rule.head) out += " " + renderPattern(p);
    out += " }\n";
  }
  return out;
}

// ____________________________________________________________________________
std::vector<OntologyWarning> validateOntology(const Ontology& ontology) {
  std::vector<OntologyWarning> out;
  std::set<std::string> assigned;
  for (const auto& cls : ontology.classes()) {
    if (assigned.count(cls)) continue;
    std::vector<std::string> component;
    for (const auto& other : ontology.superclasses(cls)) {
      if (ontology.superclasses(other).count(cls)) component.push_back(other);
    }
    for (const auto& c : component) assigned.insert(c);
    bool selfLoop = ontology.subclassEdges().count({cls, cls}) > 0;
    if (component.size() > 1 || selfLoop) {
      std::string names;
      for (const auto& c : component) names += (names.empty() ? "" : ", ") + c;
      out.push_back({OntologyWarningKind::Cycle, component,
                     "subclass cycle among {" + names + "}; members are equivalent"});
    }
  }

  std::set<std::string> referenced;
  for (const auto& [sub, super] : ontology.subclassEdges()) {
    referenced.insert(sub);
    referenced.insert(super);
  }
  for (const auto& [name, p] : ontology.properties()) {
    referenced.insert(p.domain);
    referenced.insert(p.range);
  }
  for (const auto& [name, rel] : ontology.relations()) {
    for (const auto& role : rel.roles) referenced.insert(role.filler);
  }
  for (const auto& rule : ontology.rules()) {
    for (const auto* list : {&rule.body, &rule.head}) {
      for (const auto& p : *list) {
        for (const Operand* op : {&p.s, &p.p, &p.o}) {
          if (auto* t = std::get_if<Term>(op); t && t->isIri()) {
            if (auto name = vocab::ontoName(t->value)) referenced.insert(*name);
          }
        }
      }
    }
  }
  for (const auto& cls : ontology.classes()) {
    if (!referenced.count(cls)) {
      out.push_back({OntologyWarningKind::UnusedClass, {cls},
                     "class '" + cls + "' is declared but never referenced"});
    }
  }
  return out;
}

}  // namespace wikibridge
