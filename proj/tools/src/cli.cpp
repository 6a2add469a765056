#include "wikibridge/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wikibridge/http_server.hpp"
#include "wikibridge/json.hpp"
#include "wikibridge/markup.hpp"
#include "wikibridge/ontology.hpp"
#include "wikibridge/query.hpp"
#include "wikibridge/semantics.hpp"
#include "wikibridge/text.hpp"
#include "wikibridge/vocabulary.hpp"
#include "wikibridge/wiki.hpp"

namespace fs = std::filesystem;

namespace wikibridge::cli {
namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string readFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void writeFile(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

WikiConfig configFor(const std::string& dataDir) {
  WikiConfig config;
  config.dataDir = dataDir;
  return config;
}

// Title from a file name: the stem, percent-decoded.
std::string titleFromFile(const fs::path& file) {
  std::string stem = file.stem().string();
  return percentDecode(stem).value_or(stem);
}

std::string formatSpan(const std::optional<Span>& span) {
  if (!span) return "[-]";
  return "[" + std::to_string(span->start) + "," + std::to_string(span->end) + ")";
}

void printReport(std::ostream& out, const std::string& label, const ValidationReport& r) {
  if (!r.diagnostics.empty()) {
    out << label << ": " << r.diagnostics.size() << " parse error(s)\n";
    for (const auto& d : r.diagnostics) {
      out << "  " << parseErrorKindName(d.kind) << " " << formatSpan(d.span) << " " << d.message
          << "\n";
    }
    return;
  }
  out << label << ": " << r.violations.size() << " violations\n";
  for (const auto& v : r.violations) {
    out << "  " << violationKindName(v.kind) << " " << formatSpan(v.span) << " "
        << toNTriples(v.subject) << ": " << v.detail;
    if (v.ruleName) out << " (rule \"" << *v.ruleName << "\")";
    out << "\n";
  }
}

Ontology loadOntologyFile(const fs::path& path) {
  auto loaded = loadOntology(readFile(path));
  if (!loaded.ok()) {
    std::string msg;
    for (const auto& e : loaded.errors) {
      msg += path.string() + ":" + std::to_string(e.line) + ": " +
             std::string(ontologyErrorKindName(e.kind)) + ": " + e.message + "\n";
    }
    throw IoError(msg.substr(0, msg.size() - 1));
  }
  return std::move(*loaded.ontology);
}

// ____________________________________________________________________________
int runCheck(const std::vector<std::string>& files, const std::string& ontologyPath,
             const std::string& ns, const std::string& format, std::ostream& out) {
  Ontology ontology = loadOntologyFile(ontologyPath);
  const std::string timestamp = "1970-01-01T00:00:00Z";

  // The files of one invocation are checked together, as one small wiki.
  struct Entry {
    std::string label;
    PageSource source;
    ParseResult parsed;
    std::optional<LoweringResult> lowered;
  };
  std::vector<Entry> entries;
  QuadStore context;
  for (const auto& f : files) {
    PageSource source{titleFromFile(f), ns, readFile(f)};
    Entry e{f, source, parsePage(source), std::nullopt};
    if (e.parsed.page) {
      e.lowered = lowerPage(*e.parsed.page, 1, "cli", timestamp);
      for (const auto& q :
           scopeBlankNodes(e.lowered->quads, blankScope(source.ns, source.title))) {
        context.insert(q);
      }
    }
    entries.push_back(std::move(e));
  }
  for (const auto& q : rdfsClosure(context, ontology)) context.insert(q);

  bool clean = true;
  Json reports = Json::array();
  for (const auto& e : entries) {
    ValidationReport report =
        e.parsed.page ? checkPage(*e.parsed.page, *e.lowered, ontology, &context, timestamp)
                      : parseFailureReport(e.source, 1, e.parsed.diagnostics, timestamp);
    clean = clean && report.conforms();
    if (format == "structured") {
      Json j = reportToJson(report);
      j["file"] = e.label;
      reports.push_back(std::move(j));
    } else {
      printReport(out, e.label, report);
    }
  }
  if (format == "structured") out << Json{{"reports", reports}}.dump(2) << "\n";
  return clean ? kOk : kFailed;
}

int runLower(const std::string& file, const std::string& title, const std::string& ns,
             long revision, const std::string& author, const std::string& timestamp,
             std::ostream& out, std::ostream& err) {
  PageSource source{title, ns, readFile(file)};
  auto parsed = parsePage(source);
  if (!parsed.page) {
    printReport(err, file, parseFailureReport(source, revision, parsed.diagnostics, timestamp));
    return kFailed;
  }
  auto lowered = lowerPage(*parsed.page, revision, author, timestamp);
  QuadStore store;
  for (const auto& q : lowered.quads) store.insert(q);
  for (const auto& q : lowered.metaQuads) store.insert(q);
  out << store.exportNQuads();
  return kOk;
}

void printTable(std::ostream& out, const QueryResult& result) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> width;
  for (const auto& v : result.vars) width.push_back(v.size() + 1);
  for (const auto& row : result.rows) {
    std::vector<std::string> line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      line.push_back(row[i] ? renderTerm(*row[i]) : "");
      width[i] = std::max(width[i], line.back().size());
    }
    cells.push_back(std::move(line));
  }
  auto emit = [&](const std::vector<std::string>& line) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      out << line[i];
      if (i + 1 < line.size()) out << std::string(width[i] - line[i].size() + 2, ' ');
    }
    out << "\n";
  };
  std::vector<std::string> header;
  for (const auto& v : result.vars) header.push_back("?" + v);
  emit(header);
  for (const auto& line : cells) emit(line);
  out << "(" << result.rows.size() << " row" << (result.rows.size() == 1 ? "" : "s") << ")\n";
}

int runQuery(const std::string& dataDir, const std::string& text, bool entailment,
             const std::string& format, std::ostream& out, std::ostream& err) {
  auto parsed = parseQuery(text);
  if (!parsed.query) {
    err << "query error at byte " << parsed.error->offset << ": " << parsed.error->message
        << "\n";
    return kFailed;
  }
  Wiki wiki(configFor(dataDir));
  auto result = wiki.evaluateQuery(*parsed.query, entailment);
  if (format == "json") {
    out << resultsToJson(result).dump(2) << "\n";
  } else {
    printTable(out, result);
  }
  if (result.typeErrors > 0) {
    err << result.typeErrors << " solution(s) dropped by filter type errors\n";
  }
  return kOk;
}

std::vector<ImportedPage> collectPages(const fs::path& root) {
  if (!fs::is_directory(root)) throw IoError("not a directory: " + root.string());
  std::vector<ImportedPage> pages;
  auto addFile = [&](const fs::path& file, const std::string& ns) {
    if (file.extension() != ".wiki") return;
    pages.push_back({ns, titleFromFile(file), readFile(file)});
  };
  std::vector<fs::directory_entry> entries(fs::directory_iterator(root), {});
  std::sort(entries.begin(), entries.end());
  for (const auto& entry : entries) {
    if (entry.is_regular_file()) {
      addFile(entry.path(), std::string(vocab::kDefaultNamespace));
    } else if (entry.is_directory()) {
      std::string ns = entry.path().filename().string();
      std::vector<fs::directory_entry> files(fs::directory_iterator(entry.path()), {});
      std::sort(files.begin(), files.end());
      for (const auto& f : files) {
        if (f.is_regular_file()) addFile(f.path(), ns);
      }
    }
  }
  return pages;
}

int runImport(const std::string& dataDir, const std::string& pagesDir, const std::string& author,
              const std::optional<std::string>& timestamp, std::ostream& out,
              std::ostream& err) {
  auto pages = collectPages(pagesDir);
  initDataDir(dataDir);
  Wiki wiki(configFor(dataDir));
  auto summary = wiki.importPages(pages, author, timestamp);
  for (const auto& report : summary.reports) {
    if (!report.conforms()) printReport(out, report.ns + ":" + report.page, report);
  }
  for (const auto& [label, reason] : summary.failed) {
    err << "failed: " << label << ": " << reason << "\n";
  }
  out << "imported " << summary.pages << " page(s), " << summary.violations
      << " violation(s), " << summary.failed.size() << " failed, " << wiki.quadCount()
      << " quads\n";
  return summary.failed.empty() ? kOk : kFailed;
}

int runExport(const std::string& dataDir, const std::string& output,
              const std::optional<std::string>& pagesOut, std::ostream& out) {
  Wiki wiki(configFor(dataDir));
  std::string nq = wiki.exportNQuads();
  if (output == "-") {
    out << nq;
  } else {
    writeFile(output, nq);
  }
  if (pagesOut) {
    // Current revision texts in the layout `import` reads.
    for (const auto& entry : fs::recursive_directory_iterator(fs::path(dataDir) / "pages")) {
      if (entry.path().filename() != "meta.json") continue;
      auto meta = Json::parse(readFile(entry.path()));
      std::string ns = meta.at("namespace");
      std::string title = meta.at("title");
      long n = meta.at("revisions").back().at("number");
      std::string text = readFile(entry.path().parent_path() / (std::to_string(n) + ".wiki"));
      fs::path dir = ns == vocab::kDefaultNamespace ? fs::path(*pagesOut) : fs::path(*pagesOut) / ns;
      std::string name = percentEncode(title);
      if (name == "." || name == "..") name.replace(0, 1, "%2E");
      writeFile(dir / (name + ".wiki"), text);
    }
  }
  return kOk;
}

int runRebuild(const std::string& dataDir, bool update, std::ostream& out, std::ostream& err) {
  Wiki first(configFor(dataDir));
  std::string a = first.exportNQuads();
  std::string b = first.rederivedExport();
  if (a != b) {
    err << "drift: two derivations of the store differ\n";
    return kFailed;
  }
  fs::path saved = fs::path(dataDir) / "export.nq";
  if (fs::exists(saved) && !update) {
    if (readFile(saved) != a) {
      err << "drift: store differs from " << saved.string() << "\n";
      return kFailed;
    }
    out << "no drift: " << first.pageCount() << " page(s), " << first.quadCount() << " quads\n";
    return kOk;
  }
  writeFile(saved, a);
  out << "wrote " << saved.string() << ": " << first.pageCount() << " page(s), "
      << first.quadCount() << " quads\n";
  return kOk;
}

int runAddUser(const std::string& dataDir, const std::string& user, const std::string& password,
               unsigned iterations, std::ostream& out) {
  fs::path file = fs::path(dataDir) / "users.auth";
  std::map<std::string, std::string> users;
  if (fs::exists(file)) {
    auto loaded = loadUsers(readFile(file));
    if (loaded.errorLine) {
      throw IoError(file.string() + ":" + std::to_string(*loaded.errorLine) + ": malformed");
    }
    users = std::move(loaded.users);
  }
  users[user] = hashPassword(password, iterations);
  writeFile(file, renderUsers(users));
  out << "user " << user << " written to " << file.string() << "\n";
  return kOk;
}

HttpServer* activeServer = nullptr;

void onSignal(int) {
  if (activeServer) activeServer->stop();
}

int runServe(const std::string& dataDir, const std::string& host, int port, bool strict,
             long ttlSeconds, const std::optional<std::string>& staticDir, std::ostream& out,
             std::ostream& err) {
  initDataDir(dataDir);
  WikiConfig config = configFor(dataDir);
  config.strictDefault = strict;
  config.tokenTtl = std::chrono::seconds(ttlSeconds);
  Wiki wiki(config);
  std::optional<fs::path> mount;
  if (staticDir) mount = fs::path(*staticDir);
  HttpServer server(wiki, mount);
  int bound = server.bind(host, port);
  if (bound < 0) {
    err << "cannot bind " << host << ":" << port << "\n";
    return kUsage;
  }
  out << "serving " << dataDir << " on http://" << host << ":" << bound << " ("
      << wiki.pageCount() << " pages)" << std::endl;
  activeServer = &server;
  std::signal(SIGINT, onSignal);
  std::signal(SIGTERM, onSignal);
  server.listen();
  activeServer = nullptr;
  return kOk;
}

std::string envOr(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? v : fallback;
}

}  // namespace

// ____________________________________________________________________________
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"wikibridge: semantic wiki engine"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  std::string dataDir = envOr("WIKIBRIDGE_DATA", "data");

  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  int port = std::atoi(envOr("WIKIBRIDGE_PORT", "8080").c_str());
  std::string host = "127.0.0.1";
  bool strict = envOr("WIKIBRIDGE_STRICT", "") == "1";
  long ttl = 24 * 3600;
  std::optional<std::string> staticDir;
  serve->add_option("--data", dataDir, "Data directory")->capture_default_str();
  serve->add_option("--port", port, "TCP port (0 = any free port)")->capture_default_str();
  serve->add_option("--host", host, "Bind address")->capture_default_str();
  serve->add_flag("--strict", strict, "Reject saves with violations by default");
  serve->add_option("--token-ttl", ttl, "Idle token lifetime in seconds")->capture_default_str();
  serve->add_option("--static", staticDir, "Directory served at /");

  auto* check = app.add_subcommand("check", "Check wiki files against an ontology");
  std::vector<std::string> checkFiles;
  std::string ontologyPath;
  std::string checkFormat = "text";
  std::string checkNs = std::string(vocab::kDefaultNamespace);
  check->add_option("files", checkFiles, "Wiki text files")->required()->check(CLI::ExistingFile);
  check->add_option("--ontology", ontologyPath, "Ontology (.wbo)")
      ->required()
      ->check(CLI::ExistingFile);
  check->add_option("--format", checkFormat, "Output format")
      ->check(CLI::IsMember({"text", "structured"}))
      ->capture_default_str();
  check->add_option("--ns", checkNs, "Namespace of the pages")->capture_default_str();

  auto* query = app.add_subcommand("query", "Run a SPARQL query over a data directory");
  std::string queryText;
  std::string queryFile;
  bool entailment = false;
  std::string queryFormat = "table";
  query->add_option("--data", dataDir, "Data directory")->capture_default_str();
  auto* qe = query->add_option("-e,--expr", queryText, "Query text");
  auto* qf = query->add_option("-f,--file", queryFile, "Query file")->check(CLI::ExistingFile);
  qe->excludes(qf);
  query->add_flag("--entailment", entailment, "Include inferred types");
  query->add_option("--format", queryFormat, "Output format")
      ->check(CLI::IsMember({"table", "json"}))
      ->capture_default_str();

  auto* lower = app.add_subcommand("lower", "Print the canonical N-Quads lowering of a page");
  std::string lowerFile;
  std::string lowerTitle;
  std::string lowerNs = std::string(vocab::kDefaultNamespace);
  long lowerRevision = 1;
  std::string lowerAuthor = "cli";
  std::string lowerTimestamp = "1970-01-01T00:00:00Z";
  lower->add_option("file", lowerFile, "Wiki text file")->required()->check(CLI::ExistingFile);
  lower->add_option("--title", lowerTitle, "Page title")->required();
  lower->add_option("--ns", lowerNs, "Namespace")->capture_default_str();
  lower->add_option("--revision", lowerRevision, "Revision number")->capture_default_str();
  lower->add_option("--author", lowerAuthor, "Author for provenance")->capture_default_str();
  lower->add_option("--timestamp", lowerTimestamp, "Timestamp for provenance")
      ->capture_default_str();

  auto* exportCmd = app.add_subcommand("export", "Write the canonical N-Quads export");
  std::string exportOut;
  std::optional<std::string> exportPages;
  exportCmd->add_option("--data", dataDir, "Data directory")->capture_default_str();
  exportCmd->add_option("-o,--output", exportOut, "Output file ('-' for stdout)");
  exportCmd->add_option("--pages", exportPages, "Also write current page texts here");

  auto* importCmd = app.add_subcommand("import", "Bulk-load a directory of .wiki files");
  std::string importDir;
  std::string importAuthor = "import";
  std::optional<std::string> importTimestamp;
  importCmd->add_option("--data", dataDir, "Data directory")->capture_default_str();
  importCmd->add_option("pages", importDir, "Directory: *.wiki in Main, <ns>/*.wiki otherwise")
      ->required();
  importCmd->add_option("--author", importAuthor, "Author of the new revisions")
      ->capture_default_str();
  importCmd->add_option("--timestamp", importTimestamp, "Timestamp of the new revisions");

  auto* rebuild = app.add_subcommand("rebuild", "Re-derive the store and verify it");
  bool rebuildUpdate = false;
  rebuild->add_option("--data", dataDir, "Data directory")->capture_default_str();
  rebuild->add_flag("--update", rebuildUpdate, "Overwrite export.nq instead of comparing");

  auto* init = app.add_subcommand("init", "Create a data directory with default configuration");
  init->add_option("--data", dataDir, "Data directory")->capture_default_str();

  auto* adduser = app.add_subcommand("adduser", "Add or replace a user in users.auth");
  std::string userId;
  std::string password;
  unsigned iterations = kDefaultPbkdf2Iterations;
  adduser->add_option("--data", dataDir, "Data directory")->capture_default_str();
  adduser->add_option("user", userId, "User id")->required();
  adduser->add_option("--password", password, "Password")->required();
  adduser->add_option("--iterations", iterations, "PBKDF2 iterations")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*serve) return runServe(dataDir, host, port, strict, ttl, staticDir, out, err);
    if (*check) return runCheck(checkFiles, ontologyPath, checkNs, checkFormat, out);
    if (*query) {
      if (queryText.empty() && queryFile.empty()) {
        err << "query: one of -e or -f is required\n";
        return kUsage;
      }
      std::string text = queryFile.empty() ? queryText : readFile(queryFile);
      return runQuery(dataDir, text, entailment, queryFormat, out, err);
    }
    if (*lower) {
      return runLower(lowerFile, lowerTitle, lowerNs, lowerRevision, lowerAuthor,
                      lowerTimestamp, out, err);
    }
    if (*exportCmd) {
      if (exportOut.empty()) exportOut = (fs::path(dataDir) / "export.nq").string();
      return runExport(dataDir, exportOut, exportPages, out);
    }
    if (*importCmd) return runImport(dataDir, importDir, importAuthor, importTimestamp, out, err);
    if (*rebuild) return runRebuild(dataDir, rebuildUpdate, out, err);
    if (*init) {
      initDataDir(dataDir);
      out << "initialized " << dataDir << "\n";
      return kOk;
    }
    if (*adduser) return runAddUser(dataDir, userId, password, iterations, out);
  } catch (const IoError& e) {
    err << e.what() << "\n";
    return kUsage;
  } catch (const WikiError& e) {
    err << e.what() << "\n";
    return kUsage;
  } catch (const fs::filesystem_error& e) {
    err << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace wikibridge::cli
