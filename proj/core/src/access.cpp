#include "wikibridge/access.hpp"

#include <sstream>

#include "wikibridge/text.hpp"

namespace wikibridge {

std::string_view actionName(Action a) {
  switch (a) {
    case Action::Read: return "read";
    case Action::Edit: return "edit";
    case Action::Annotate: return "annotate";
    case Action::Query: return "query";
    case Action::Admin: return "admin";
  }
  return "read";
}

std::optional<Action> actionFromName(std::string_view name) {
  for (Action a : kAllActions) {
    if (actionName(a) == name) return a;
  }
  return std::nullopt;
}

std::string AclRule::text() const {
  std::string out = effect == Effect::Allow ? "allow " : "deny ";
  switch (who.kind) {
    case Who::Kind::User: out += "user:" + who.name; break;
    case Who::Kind::Group: out += "group:" + who.name; break;
    case Who::Kind::Anyone: out += "*"; break;
  }
  out += " ";
  out += actionName(action);
  out += " ";
  switch (resource.kind) {
    case ResourcePattern::Kind::Page:
      out += "page:" + percentEncode(resource.ns) + ":" + percentEncode(resource.title);
      break;
    case ResourcePattern::Kind::Namespace: out += "namespace:" + percentEncode(resource.ns); break;
    case ResourcePattern::Kind::Any: out += "*"; break;
  }
  return out;
}

// ____________________________________________________________________________
namespace {

std::vector<std::string> words(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(std::move(w));
  return out;
}

std::optional<std::string> decoded(std::string_view s) {
  auto d = percentDecode(s);
  if (!d || d->empty()) return std::nullopt;
  return d;
}

std::optional<Who> parseWho(std::string_view w) {
  if (w == "*") return Who{};
  auto colon = w.find(':');
  if (colon == std::string_view::npos || colon + 1 == w.size()) return std::nullopt;
  auto kind = w.substr(0, colon);
  std::string name(w.substr(colon + 1));
  if (kind == "user") return Who{Who::Kind::User, name};
  if (kind == "group") return Who{Who::Kind::Group, name};
  return std::nullopt;
}

std::optional<ResourcePattern> parseResource(std::string_view r) {
  if (r == "*") return ResourcePattern{};
  if (r.starts_with("namespace:")) {
    auto ns = decoded(r.substr(10));
    if (!ns) return std::nullopt;
    return ResourcePattern{ResourcePattern::Kind::Namespace, *ns, {}};
  }
  if (r.starts_with("page:")) {
    auto rest = r.substr(5);
    auto colon = rest.find(':');
    if (colon == std::string_view::npos) return std::nullopt;
    auto ns = decoded(rest.substr(0, colon));
    auto title = decoded(rest.substr(colon + 1));
    if (!ns || !title) return std::nullopt;
    return ResourcePattern{ResourcePattern::Kind::Page, *ns, *title};
  }
  return std::nullopt;
}

}  // namespace

AclLoadResult loadAcl(std::string_view text) {
  AclConfig config;
  std::size_t lineNo = 0;
  auto fail = [&](AclErrorKind kind, std::string message) {
    return AclLoadResult{std::nullopt, AclError{kind, lineNo, std::move(message)}};
  };
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++lineNo;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto w = words(line);
    if (w.empty()) continue;
    if (w[0] == "user") {
      if (w.size() != 4 || w[2] != "groups") {
        return fail(AclErrorKind::Syntax, "expected 'user <id> groups a,b'");
      }
      auto& groups = config.memberships[w[1]];
      std::istringstream list(w[3]);
      for (std::string g; std::getline(list, g, ',');) {
        if (g.empty()) return fail(AclErrorKind::Syntax, "empty group name");
        groups.insert(g);
      }
      continue;
    }
    if (w[0] == "default") {
      if (w.size() != 3 || (w[2] != "allow" && w[2] != "deny")) {
        return fail(AclErrorKind::Syntax, "expected 'default <action> allow|deny'");
      }
      auto action = actionFromName(w[1]);
      if (!action) return fail(AclErrorKind::UnknownAction, "unknown action '" + w[1] + "'");
      if (w[2] == "allow") {
        config.defaultAllow.insert(*action);
      } else {
        config.defaultAllow.erase(*action);
      }
      continue;
    }
    if (w[0] != "allow" && w[0] != "deny") {
      return fail(AclErrorKind::Syntax, "unknown keyword '" + w[0] + "'");
    }
    if (w.size() != 4) {
      return fail(AclErrorKind::Syntax, "expected 'allow|deny <who> <action> <resource>'");
    }
    AclRule rule;
    rule.effect = w[0] == "allow" ? Effect::Allow : Effect::Deny;
    rule.line = lineNo;
    auto who = parseWho(w[1]);
    if (!who) return fail(AclErrorKind::Syntax, "bad subject '" + w[1] + "'");
    rule.who = *who;
    auto action = actionFromName(w[2]);
    if (!action) return fail(AclErrorKind::UnknownAction, "unknown action '" + w[2] + "'");
    rule.action = *action;
    auto resource = parseResource(w[3]);
    if (!resource) return fail(AclErrorKind::Syntax, "bad resource '" + w[3] + "'");
    rule.resource = *resource;
    config.rules.push_back(std::move(rule));
  }
  return {std::move(config), std::nullopt};
}

Principal principalFor(const AclConfig& config, std::string_view user) {
  Principal p{std::string(user), {}};
  if (auto it = config.memberships.find(p.user); it != config.memberships.end()) {
    p.groups = it->second;
  }
  return p;
}

bool matches(const ResourcePattern& pattern, const Resource& resource) {
  switch (pattern.kind) {
    case ResourcePattern::Kind::Any: return true;
    case ResourcePattern::Kind::Namespace:
      return resource.kind != Resource::Kind::Global && resource.ns == pattern.ns;
    case ResourcePattern::Kind::Page:
      return resource.kind == Resource::Kind::Page && resource.ns == pattern.ns &&
             resource.title == pattern.title;
  }
  return false;
}

bool matches(const Who& who, const Principal& principal) {
  switch (who.kind) {
    case Who::Kind::Anyone: return true;
    case Who::Kind::User: return who.name == principal.user;
    case Who::Kind::Group: return principal.groups.count(who.name) > 0;
  }
  return false;
}

std::string Decision::describe(Action action) const {
  if (rule) return rule->text();
  return "default " + std::string(actionName(action)) +
         (effect == Effect::Allow ? " allow" : " deny");
}

Decision authorize(const AclConfig& config, const Principal& principal, Action action,
                   const Resource& resource) {
  const AclRule* best = nullptr;
  for (const auto& rule : config.rules) {
    if (rule.action != action || !matches(rule.who, principal) ||
        !matches(rule.resource, resource)) {
      continue;
    }
    if (!best) {
      best = &rule;
      continue;
    }
    int a = rule.resource.specificity();
    int b = best->resource.specificity();
    // Higher stratum wins; inside a stratum the first deny, else the first allow.
    if (a > b || (a == b && rule.effect == Effect::Deny && best->effect == Effect::Allow)) {
      best = &rule;
    }
  }
  if (best) return {best->effect, *best};
  return {config.defaultAllow.count(action) ? Effect::Allow : Effect::Deny, std::nullopt};
}

std::string defaultAclText() {
  return R"(# Access control. Rules: allow|deny <who> <action> <resource>
# who: user:<id> | group:<name> | *    resource: page:<ns>:<title> | namespace:<ns> | *

# readers
allow group:readers read *

# contributors
allow group:contributors read *
allow group:contributors edit *
allow group:contributors annotate *

# specialists
allow group:specialists read *
allow group:specialists edit *
allow group:specialists annotate *
allow group:specialists query *

# admins
allow group:admins read *
allow group:admins edit *
allow group:admins annotate *
allow group:admins query *
allow group:admins admin *

default read allow

# user alice groups specialists
)";
}

}  // namespace wikibridge
