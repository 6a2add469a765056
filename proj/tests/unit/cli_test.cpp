#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "fixtures.hpp"
#include "wikibridge/cli.hpp"
#include "wikibridge/wiki.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "wikibridge");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = wikibridge::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string pagesDir() { return (fixtures::dir() / "heritage" / "pages").string(); }
std::string ontologyPath() { return (fixtures::dir() / "heritage" / "ontology.wbo").string(); }

}  // namespace

TEST(Cli, Usage) {
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"frobnicate"}).code, 2);
  EXPECT_EQ(cli({"check"}).code, 2);
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST(Cli, ImportQueryExportRebuild) {
  fixtures::TempDir tmp;
  std::string data = (tmp.path() / "data").string();
  ASSERT_EQ(cli({"init", "--data", data}).code, 0);
  fixtures::writeFile(tmp.path() / "data" / "ontology.wbo", fixtures::heritageOntologyText());
  auto imported = cli({"import", "--data", data, pagesDir(), "--timestamp", "2024-01-01T00:00:00Z"});
  ASSERT_EQ(imported.code, 0) << imported.err;
  EXPECT_NE(imported.out.find("imported 20 page(s), 0 violation(s), 0 failed"), std::string::npos)
      << imported.out;

  auto q = cli({"query", "--data", data, "--entailment", "-e",
                "SELECT ?c WHERE { ?c rdf:type wb:onto/Church } ORDER BY ?c"});
  ASSERT_EQ(q.code, 0) << q.err;
  EXPECT_EQ(q.out.rfind("?c", 0), 0u);
  EXPECT_NE(q.out.find("rows)"), std::string::npos);
  auto json = cli({"query", "--data", data, "--format", "json", "-e",
                   "SELECT ?c WHERE { ?c rdf:type wb:onto/Chapel }"});
  ASSERT_EQ(json.code, 0);
  EXPECT_TRUE(wikibridge::Json::parse(json.out).contains("head"));
  EXPECT_EQ(cli({"query", "--data", data, "-e", "SELECT"}).code, 1);

  auto exported = cli({"export", "--data", data, "-o", "-"});
  ASSERT_EQ(exported.code, 0);
  EXPECT_FALSE(exported.out.empty());

  auto first = cli({"rebuild", "--data", data});
  ASSERT_EQ(first.code, 0) << first.err;
  EXPECT_EQ(fixtures::readFile(tmp.path() / "data" / "export.nq"), exported.out);
  auto second = cli({"rebuild", "--data", data});
  EXPECT_EQ(second.code, 0);
  EXPECT_EQ(second.out.rfind("no drift", 0), 0u);
  fixtures::writeFile(tmp.path() / "data" / "export.nq", "tampered\n");
  EXPECT_EQ(cli({"rebuild", "--data", data}).code, 1);

  // Exported page texts re-import to the same store.
  std::string pagesOut = (tmp.path() / "pages").string();
  ASSERT_EQ(cli({"export", "--data", data, "-o", (tmp.path() / "x.nq").string(), "--pages",
                 pagesOut}).code, 0);
  std::string again = (tmp.path() / "again").string();
  cli({"init", "--data", again});
  fixtures::writeFile(tmp.path() / "again" / "ontology.wbo", fixtures::heritageOntologyText());
  ASSERT_EQ(cli({"import", "--data", again, pagesOut, "--timestamp", "2024-01-01T00:00:00Z"}).code,
            0);
  EXPECT_EQ(cli({"export", "--data", again, "-o", "-"}).out, exported.out);
}

TEST(Cli, Check) {
  fixtures::TempDir tmp;
  std::vector<std::string> args = {"check", "--ontology", ontologyPath()};
  for (const auto& entry : std::filesystem::directory_iterator(pagesDir())) {
    args.push_back(entry.path().string());
  }
  auto clean = cli(args);
  EXPECT_EQ(clean.code, 0) << clean.out;

  auto bad = tmp.path() / "Bad.wiki";
  fixtures::writeFile(bad, "{{#ann: type=Church | height=\"tall\" | style=[[Gothic]]}}");
  auto r = cli({"check", "--ontology", ontologyPath(), bad.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("DatatypeViolation"), std::string::npos) << r.out;
  r = cli({"check", "--ontology", ontologyPath(), "--format", "structured", bad.string()});
  EXPECT_EQ(r.code, 1);
  auto j = wikibridge::Json::parse(r.out);
  EXPECT_EQ(j["reports"][0]["page"], "Bad");

  fixtures::writeFile(tmp.path() / "broken.wbo", "clas X");
  EXPECT_EQ(cli({"check", "--ontology", (tmp.path() / "broken.wbo").string(), bad.string()}).code,
            2);
}

TEST(Cli, Lower) {
  fixtures::TempDir tmp;
  auto file = tmp.path() / "p.wiki";
  fixtures::writeFile(file, "{{#ann: type=Church | height=12.5}}");
  auto r = cli({"lower", file.string(), "--title", "P", "--timestamp", "2024-01-01T00:00:00Z"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 6);
  fixtures::writeFile(file, "{{#ann: x");
  EXPECT_EQ(cli({"lower", file.string(), "--title", "P"}).code, 1);
}

TEST(Cli, AddUser) {
  fixtures::TempDir tmp;
  std::string data = tmp.path().string();
  ASSERT_EQ(cli({"adduser", "--data", data, "alice", "--password", "pw", "--iterations", "10"}).code,
            0);
  auto users = wikibridge::loadUsers(fixtures::readFile(tmp.path() / "users.auth"));
  ASSERT_EQ(users.users.count("alice"), 1u);
  EXPECT_TRUE(wikibridge::verifyPassword(users.users["alice"], "pw"));
}
