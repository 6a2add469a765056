#pragma once

// Rule-based authorization.
//
// acl.conf, one statement per line, `#` starts a comment:
//   allow|deny <who> <action> <resource>
//   user <id> groups a,b
//   default <action> allow|deny
// who:      user:<id> | group:<name> | *
// action:   read | edit | annotate | query | admin
// resource: page:<ns>:<title> | namespace:<ns> | *
//
// Among matching rules the most specific resource stratum decides
// (page > namespace > *); deny wins inside a stratum. With no matching rule
// the per-action default applies, deny unless configured otherwise.

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace wikibridge {

enum class Action { Read, Edit, Annotate, Query, Admin };

inline constexpr std::array<Action, 5> kAllActions = {Action::Read, Action::Edit, Action::Annotate,
                                                      Action::Query, Action::Admin};

std::string_view actionName(Action a);
std::optional<Action> actionFromName(std::string_view name);

enum class Effect { Allow, Deny };

struct Who {
  enum class Kind { User, Group, Anyone } kind = Kind::Anyone;
  std::string name;
  bool operator==(const Who&) const = default;
};

struct ResourcePattern {
  enum class Kind { Page, Namespace, Any } kind = Kind::Any;
  std::string ns;
  std::string title;

  int specificity() const { return kind == Kind::Page ? 2 : kind == Kind::Namespace ? 1 : 0; }
  bool operator==(const ResourcePattern&) const = default;
};

struct AclRule {
  Effect effect = Effect::Deny;
  Who who;
  Action action = Action::Read;
  ResourcePattern resource;
  std::size_t line = 0;  // 1-based line in the config

  // Canonical text, e.g. "allow group:editors edit page:Main:StMartin".
  std::string text() const;
  bool operator==(const AclRule&) const = default;
};

struct AclConfig {
  std::vector<AclRule> rules;                             // file order
  std::map<std::string, std::set<std::string>> memberships;  // user -> groups
  std::set<Action> defaultAllow;
};

enum class AclErrorKind { Syntax, UnknownAction };

struct AclError {
  AclErrorKind kind = AclErrorKind::Syntax;
  std::size_t line = 0;
  std::string message;
};

struct AclLoadResult {
  std::optional<AclConfig> config;
  std::optional<AclError> error;  // first error; config unset
};

AclLoadResult loadAcl(std::string_view text);

struct Principal {
  std::string user;  // "anonymous" for unauthenticated requests
  std::set<std::string> groups;
};

inline constexpr std::string_view kAnonymous = "anonymous";

// Principal with the groups the config lists for `user`.
Principal principalFor(const AclConfig& config, std::string_view user);

// What a request acts on. Global resources (query console, ontology,
// administration) are matched by `*` rules only.
struct Resource {
  enum class Kind { Page, Namespace, Global } kind = Kind::Global;
  std::string ns;
  std::string title;

  static Resource page(std::string ns, std::string title) {
    return {Kind::Page, std::move(ns), std::move(title)};
  }
  static Resource nameSpace(std::string ns) { return {Kind::Namespace, std::move(ns), {}}; }
  static Resource global() { return {}; }
};

bool matches(const ResourcePattern& pattern, const Resource& resource);
bool matches(const Who& who, const Principal& principal);

struct Decision {
  Effect effect = Effect::Deny;
  std::optional<AclRule> rule;  // nullopt when the default applied

  bool allowed() const { return effect == Effect::Allow; }
  // Rule text, or "default <action> allow|deny".
  std::string describe(Action action) const;
};

Decision authorize(const AclConfig& config, const Principal& principal, Action action,
                   const Resource& resource);

// Role presets: readers, contributors, specialists, admins.
std::string defaultAclText();

}  // namespace wikibridge
