#pragma once

// The explicitly stored conceptual model: classes with (multiple) inheritance,
// typed properties with cardinalities, n-ary relation schemas and constraint
// rules. Loaded from the line-oriented `.wbo` DSL (docs/ontology-dsl.md).
//
// Ontology values are immutable once loaded and safe to share across threads.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "wikibridge/datatype.hpp"
#include "wikibridge/expr.hpp"

namespace wikibridge {

enum class PropertyKind { Data, Object };

struct PropertyDecl {
  std::string name;
  PropertyKind kind = PropertyKind::Data;
  std::string domain;  // class name
  std::string range;   // class or relation name (object), datatype name (data)
  std::size_t minCard = 0;
  std::optional<std::size_t> maxCard;  // nullopt = unbounded

  std::optional<Datatype> rangeDatatype() const {
    return kind == PropertyKind::Data ? datatypeFromName(range) : std::nullopt;
  }
  bool operator==(const PropertyDecl&) const = default;
};

struct RoleDecl {
  std::string name;
  std::string filler;  // class, relation or datatype name
  bool required = false;
  bool operator==(const RoleDecl&) const = default;
};

struct RelationSchema {
  std::string name;
  std::vector<RoleDecl> roles;  // declaration order, at least two

  const RoleDecl* role(std::string_view roleName) const;
  bool operator==(const RelationSchema&) const = default;
};

// Body patterns + filters must admit an extension satisfying every head
// pattern; head-only variables are existential.
struct ConstraintRule {
  std::string name;
  std::vector<TriplePattern> body;
  std::vector<FilterExpr> filters;
  std::vector<TriplePattern> head;
  bool operator==(const ConstraintRule&) const = default;
};

struct ClassRef {
  std::string name;
  bool operator==(const ClassRef&) const = default;
};
struct NotFound {
  bool operator==(const NotFound&) const = default;
};
using LookupResult = std::variant<NotFound, ClassRef, PropertyDecl, RelationSchema>;

class UnknownClassError : public std::invalid_argument {
 public:
  explicit UnknownClassError(const std::string& name)
      : std::invalid_argument("unknown class: " + name), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class Ontology {
 public:
  Ontology() = default;

  const std::set<std::string>& classes() const { return classes_; }
  const std::set<std::pair<std::string, std::string>>& subclassEdges() const {
    return subclassEdges_;
  }
  const std::map<std::string, PropertyDecl>& properties() const { return properties_; }
  const std::map<std::string, RelationSchema>& relations() const { return relations_; }
  const std::vector<ConstraintRule>& rules() const { return rules_; }

  bool hasClass(std::string_view name) const;
  const PropertyDecl* property(std::string_view name) const;
  const RelationSchema* relation(std::string_view name) const;

  // Reflexive-transitive reachability over subclass edges. Throws
  // UnknownClassError if either class is undeclared.
  bool isSubclassOf(std::string_view sub, std::string_view super) const;
  // Every class reachable from `name`, including itself. Throws UnknownClassError.
  const std::set<std::string>& superclasses(std::string_view name) const;

  LookupResult lookup(std::string_view name) const;

  // Stable digest of the canonical rendering; changes whenever the model does.
  std::string contentHash() const;

  bool operator==(const Ontology& other) const;

 private:
  friend class OntologyLoader;
  void computeClosure();

  std::set<std::string> classes_;
  std::set<std::pair<std::string, std::string>> subclassEdges_;
  std::map<std::string, PropertyDecl> properties_;
  std::map<std::string, RelationSchema> relations_;
  std::vector<ConstraintRule> rules_;

  std::map<std::string, std::set<std::string>, std::less<>> ancestors_;
};

enum class OntologyErrorKind { SyntaxError, UndefinedReference, DuplicateDeclaration, BadCardinality };

std::string_view ontologyErrorKindName(OntologyErrorKind kind);

struct OntologyError {
  OntologyErrorKind kind;
  std::size_t line = 0;  // 1-based
  std::string name;      // offending name, when there is one
  std::string message;
};

struct OntologyLoadResult {
  std::optional<Ontology> ontology;  // set iff errors is empty
  std::vector<OntologyError> errors;

  bool ok() const { return ontology.has_value(); }
};

OntologyLoadResult loadOntology(std::string_view text);

// Canonical DSL text; loadOntology(renderOntology(o)) == o.
std::string renderOntology(const Ontology& ontology);

enum class OntologyWarningKind { Cycle, UnusedClass };

struct OntologyWarning {
  OntologyWarningKind kind;
  std::vector<std::string> classes;  // sorted
  std::string message;
};

// Subclass cycles (one warning per strongly connected component) and classes
// never referenced by an edge, property, role or rule.
std::vector<OntologyWarning> validateOntology(const Ontology& ontology);

}  // namespace wikibridge
