#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "wikibridge/access.hpp"

using namespace wikibridge;

namespace {

AclConfig load(const std::string& text) {
  auto r = loadAcl(text);
  EXPECT_TRUE(r.config.has_value()) << (r.error ? r.error->message : "");
  return r.config ? *r.config : AclConfig{};
}

}  // namespace

TEST(Acl, LoadRule) {
  auto c = load("allow group:editors edit page:Main:StMartin");
  ASSERT_EQ(c.rules.size(), 1u);
  EXPECT_EQ(c.rules[0].resource.specificity(), 2);
  EXPECT_EQ(c.rules[0].effect, Effect::Allow);
  EXPECT_EQ(c.rules[0].who, (Who{Who::Kind::Group, "editors"}));
  EXPECT_EQ(c.rules[0].text(), "allow group:editors edit page:Main:StMartin");
  EXPECT_EQ(c.rules[0].line, 1u);
}

TEST(Acl, LoadErrors) {
  auto r = loadAcl("permit bob edit *");
  ASSERT_TRUE(r.error.has_value());
  EXPECT_EQ(r.error->kind, AclErrorKind::Syntax);
  EXPECT_EQ(r.error->line, 1u);
  r = loadAcl("# c\nallow * fly *");
  ASSERT_TRUE(r.error.has_value());
  EXPECT_EQ(r.error->kind, AclErrorKind::UnknownAction);
  EXPECT_EQ(r.error->line, 2u);
  EXPECT_TRUE(loadAcl("allow bob edit *").error.has_value());
  EXPECT_TRUE(loadAcl("allow user: edit *").error.has_value());
  EXPECT_TRUE(loadAcl("allow * edit page:Main").error.has_value());
  EXPECT_TRUE(loadAcl("allow * edit space:Main").error.has_value());
  EXPECT_TRUE(loadAcl("allow * edit * extra").error.has_value());
  EXPECT_TRUE(loadAcl("default edit maybe").error.has_value());
  EXPECT_TRUE(loadAcl("user bob groups a,,b").error.has_value());
}

TEST(Acl, EmptyFileDeniesEverything) {
  auto c = load("");
  EXPECT_TRUE(c.rules.empty());
  for (Action a : kAllActions) {
    EXPECT_FALSE(authorize(c, {"u", {}}, a, Resource::page("Main", "X")).allowed());
    EXPECT_FALSE(authorize(c, {"u", {}}, a, Resource::global()).allowed());
  }
}

TEST(Acl, DirectMatch) {
  auto c = load("user alice groups editors\nallow group:editors edit page:Main:StMartin");
  auto d = authorize(c, principalFor(c, "alice"), Action::Edit, Resource::page("Main", "StMartin"));
  EXPECT_TRUE(d.allowed());
  ASSERT_TRUE(d.rule.has_value());
  EXPECT_EQ(d.describe(Action::Edit), "allow group:editors edit page:Main:StMartin");
  auto other = authorize(c, principalFor(c, "alice"), Action::Edit, Resource::page("Main", "X"));
  EXPECT_FALSE(other.allowed());
  EXPECT_EQ(other.describe(Action::Edit), "default edit deny");
}

TEST(Acl, SpecificityBeatsOrder) {
  auto c = load("allow user:bob edit namespace:Main\ndeny user:bob edit page:Main:Secret");
  Principal bob{"bob", {}};
  EXPECT_FALSE(authorize(c, bob, Action::Edit, Resource::page("Main", "Secret")).allowed());
  EXPECT_TRUE(authorize(c, bob, Action::Edit, Resource::page("Main", "Other")).allowed());
  EXPECT_FALSE(authorize(c, bob, Action::Edit, Resource::page("Talk", "Other")).allowed());
}

TEST(Acl, DenyWinsInsideStratum) {
  auto c = load("allow * read *\ndeny group:g read *\nallow user:u read *");
  auto d = authorize(c, {"u", {"g"}}, Action::Read, Resource::global());
  EXPECT_FALSE(d.allowed());
  EXPECT_EQ(d.rule->line, 2u);
}

TEST(Acl, GlobalResourcesOnlyMatchStar) {
  auto c = load("allow * query namespace:Main\nallow * admin page:Main:X");
  EXPECT_FALSE(authorize(c, {"u", {}}, Action::Query, Resource::global()).allowed());
  EXPECT_FALSE(authorize(c, {"u", {}}, Action::Admin, Resource::global()).allowed());
}

TEST(Acl, Defaults) {
  auto c = load("default read allow\ndefault edit allow\ndefault edit deny");
  EXPECT_TRUE(authorize(c, {"u", {}}, Action::Read, Resource::page("Main", "X")).allowed());
  EXPECT_FALSE(authorize(c, {"u", {}}, Action::Edit, Resource::page("Main", "X")).allowed());
}

TEST(Acl, PercentEncodedNames) {
  auto c = load("deny * read page:Main:St%20Martin");
  EXPECT_FALSE(authorize(c, {"u", {}}, Action::Read, Resource::page("Main", "St Martin")).allowed());
}

TEST(Acl, DefaultPresets) {
  auto c = load(defaultAclText());
  auto can = [&](const std::string& group, Action a) {
    return authorize(c, {"x", {group}}, a, Resource::global()).allowed();
  };
  EXPECT_TRUE(can("readers", Action::Read));
  EXPECT_FALSE(can("readers", Action::Edit));
  EXPECT_TRUE(can("contributors", Action::Annotate));
  EXPECT_FALSE(can("contributors", Action::Query));
  EXPECT_TRUE(can("specialists", Action::Query));
  EXPECT_FALSE(can("specialists", Action::Admin));
  EXPECT_TRUE(can("admins", Action::Admin));
  EXPECT_TRUE(can("nobody", Action::Read));  // default read allow
  EXPECT_FALSE(can("nobody", Action::Edit));
}

TEST(Acl, RandomConfigsMatchOracle) {
  std::mt19937_64 rng(71);
  const std::vector<std::string> whos = {"user:alice", "user:bob", "group:g1", "group:g2", "*"};
  const std::vector<std::string> resources = {"page:Main:P", "page:Main:Q", "namespace:Main",
                                              "namespace:Talk", "*"};
  const std::vector<Resource> targets = {Resource::page("Main", "P"), Resource::page("Talk", "P"),
                                         Resource::nameSpace("Main"), Resource::global()};
  for (int trial = 0; trial < 500; ++trial) {
    std::string text;
    for (int n = rng() % 8; n > 0; --n) {
      text += std::string(rng() % 2 ? "allow " : "deny ") + whos[rng() % whos.size()] + " " +
              std::string(actionName(kAllActions[rng() % 5])) + " " +
              resources[rng() % resources.size()] + "\n";
    }
    if (rng() % 2) text += "default edit allow\n";
    auto c = load(text);
    for (const auto& user : {"alice", "bob"}) {
      for (int mask = 0; mask < 4; ++mask) {
        Principal p{user, {}};
        if (mask & 1) p.groups.insert("g1");
        if (mask & 2) p.groups.insert("g2");
        for (Action a : kAllActions) {
          for (const auto& r : targets) {
            auto d = authorize(c, p, a, r);
            ASSERT_EQ(d.effect, oracle::decide(c, p, a, r)) << text;
            if (d.rule) EXPECT_EQ(d.rule->effect, d.effect);
          }
        }
      }
    }
  }
}
