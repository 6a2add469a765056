#include "wikibridge/wiki.hpp"

#include <algorithm>
#include <ctime>
#include <fstream>
#include <mutex>
#include <sstream>
#include <system_error>

#include "wikibridge/markup.hpp"
#include "wikibridge/query.hpp"
#include "wikibridge/text.hpp"
#include "wikibridge/vocabulary.hpp"

namespace fs = std::filesystem;

namespace wikibridge {

struct Wiki::Page {
  struct Revision {
    long number = 0;
    std::string author;
    std::string timestamp;
    ValidationReport report;
  };

  std::string ns;
  std::string title;
  std::vector<Revision> revisions;  // ascending, gap-free from 1
  std::string currentText;
  std::optional<ValidationReport> recheck;  // guarded by cacheMutex_

  long current() const { return revisions.empty() ? 0 : revisions.back().number; }
};

namespace {

std::string readFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw WikiError("cannot read " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void writeFileAtomic(const fs::path& path, std::string_view content) {
  fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw WikiError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw WikiError("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

// Percent-encoded directory name; "." and ".." are escaped too.
std::string dirName(std::string_view name) {
  std::string enc = percentEncode(name);
  if (enc == "." || enc == "..") enc.replace(0, 1, "%2E");
  return enc;
}

ApiResponse error(int status, std::string message, Json extra = Json::object()) {
  extra["error"] = std::move(message);
  return {status, std::move(extra)};
}

ApiResponse forbidden(const Decision& decision, Action action) {
  return error(403, "forbidden",
               {{"action", std::string(actionName(action))}, {"rule", decision.describe(action)}});
}

ApiResponse unauthorized() { return error(401, "invalid or expired token"); }

bool validNamespace(const std::string& ns) { return isIdentifier(ns); }

Json quadsJson(const std::vector<Quad>& quads) {
  Json out = Json::array();
  for (const auto& q : quads) out.push_back(quadToJson(q));
  return out;
}

std::string nquads(const std::vector<Quad>& quads) {
  QuadStore tmp;
  for (const auto& q : quads) tmp.insert(q);
  return tmp.exportNQuads();
}

Json ontologyErrorsJson(const std::vector<OntologyError>& errors) {
  Json out = Json::array();
  for (const auto& e : errors) {
    out.push_back({{"kind", std::string(ontologyErrorKindName(e.kind))},
                   {"line", e.line},
                   {"name", e.name},
                   {"message", e.message}});
  }
  return out;
}

}  // namespace

std::string utcNow() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void initDataDir(const fs::path& dir) {
  fs::create_directories(dir / "pages");
  if (!fs::exists(dir / "acl.conf")) writeFileAtomic(dir / "acl.conf", defaultAclText());
  if (!fs::exists(dir / "ontology.wbo")) writeFileAtomic(dir / "ontology.wbo", "");
  if (!fs::exists(dir / "users.auth")) writeFileAtomic(dir / "users.auth", "");
}

// ____________________________________________________________________________
Wiki::Wiki(WikiConfig config) : config_(std::move(config)), tokens_(config_.tokenTtl) {
  loadFromDisk();
}

Wiki::~Wiki() = default;

std::string Wiki::now() const { return config_.clock ? config_.clock() : utcNow(); }

void Wiki::loadFromDisk() {
  const fs::path& dir = config_.dataDir;
  if (!fs::is_directory(dir)) throw WikiError("data directory not found: " + dir.string());
  if (fs::exists(dir / "ontology.wbo")) {
    auto loaded = loadOntology(readFile(dir / "ontology.wbo"));
    if (!loaded.ok()) {
      const auto& e = loaded.errors.front();
      throw WikiError("ontology.wbo:" + std::to_string(e.line) + ": " + e.message);
    }
    ontology_ = std::move(*loaded.ontology);
  }
  if (fs::exists(dir / "acl.conf")) {
    auto loaded = loadAcl(readFile(dir / "acl.conf"));
    if (!loaded.config) {
      throw WikiError("acl.conf:" + std::to_string(loaded.error->line) + ": " +
                      loaded.error->message);
    }
    acl_ = std::move(*loaded.config);
  }
  if (fs::exists(dir / "users.auth")) {
    auto loaded = loadUsers(readFile(dir / "users.auth"));
    if (loaded.errorLine) {
      throw WikiError("users.auth:" + std::to_string(*loaded.errorLine) + ": malformed entry");
    }
    users_ = std::move(loaded.users);
  }
  if (fs::is_directory(dir / "pages")) {
    std::vector<fs::path> pageDirs;
    for (const auto& nsEntry : fs::directory_iterator(dir / "pages")) {
      if (!nsEntry.is_directory()) continue;
      for (const auto& titleEntry : fs::directory_iterator(nsEntry.path())) {
        if (titleEntry.is_directory()) pageDirs.push_back(titleEntry.path());
      }
    }
    std::sort(pageDirs.begin(), pageDirs.end());
    for (const auto& p : pageDirs) loadPageDir(p);
  }
  for (auto& [key, page] : pages_) indexPage(*page, store_);
  recomputeInferred(store_);
}

void Wiki::loadPageDir(const fs::path& dir) {
  if (!fs::exists(dir / "meta.json")) return;
  Json meta;
  try {
    meta = Json::parse(readFile(dir / "meta.json"));
  } catch (const Json::exception& e) {
    throw WikiError("malformed " + (dir / "meta.json").string() + ": " + e.what());
  }
  auto page = std::make_unique<Page>();
  try {
    page->ns = meta.at("namespace").get<std::string>();
    page->title = meta.at("title").get<std::string>();
    for (const auto& r : meta.at("revisions")) {
      Page::Revision rev;
      rev.number = r.at("number").get<long>();
      rev.author = r.at("author").get<std::string>();
      rev.timestamp = r.at("timestamp").get<std::string>();
      auto report = reportFromJson(r.at("report"));
      if (!report) throw WikiError("bad report in " + dir.string());
      rev.report = std::move(*report);
      if (rev.number != page->current() + 1) throw WikiError("revision gap in " + dir.string());
      page->revisions.push_back(std::move(rev));
    }
  } catch (const Json::exception& e) {
    throw WikiError("malformed " + (dir / "meta.json").string() + ": " + e.what());
  }
  if (page->revisions.empty()) return;
  page->currentText = readRevisionText(*page, page->current());
  auto key = std::pair{page->ns, page->title};
  pages_[key] = std::move(page);
}

std::string Wiki::readRevisionText(const Page& page, long number) const {
  return readFile(config_.dataDir / "pages" / dirName(page.ns) / dirName(page.title) /
                  (std::to_string(number) + ".wiki"));
}

void Wiki::writePageFiles(const Page& page, long number, const std::string& text) const {
  writeFileAtomic(config_.dataDir / "pages" / dirName(page.ns) / dirName(page.title) /
                      (std::to_string(number) + ".wiki"),
                  text);
}

void Wiki::writeMeta(const Page& page) const {
  Json revisions = Json::array();
  for (const auto& r : page.revisions) {
    revisions.push_back({{"number", r.number},
                         {"author", r.author},
                         {"timestamp", r.timestamp},
                         {"report", reportToJson(r.report)}});
  }
  Json meta = {{"namespace", page.ns}, {"title", page.title}, {"revisions", revisions}};
  writeFileAtomic(config_.dataDir / "pages" / dirName(page.ns) / dirName(page.title) / "meta.json",
                  meta.dump(2) + "\n");
}

// Inserts the lowering of the current revision (scoped) and its provenance.
void Wiki::indexPage(Page& page, QuadStore& store) const {
  if (page.revisions.empty()) return;
  auto parsed = parsePage({page.title, page.ns, page.currentText});
  if (!parsed.page) return;
  const auto& rev = page.revisions.back();
  auto lowered = lowerPage(*parsed.page, rev.number, rev.author, rev.timestamp);
  for (const auto& q : scopeBlankNodes(lowered.quads, blankScope(page.ns, page.title))) {
    store.insert(q);
  }
  for (const auto& q : lowered.metaQuads) store.insert(q);
}

void Wiki::recomputeInferred(QuadStore& store) const {
  store.dropGraph(Term::iri(vocab::inferredGraphIri()));
  for (const auto& q : rdfsClosure(store, ontology_)) store.insert(q);
}

Wiki::Page* Wiki::findPage(const std::string& ns, const std::string& title) const {
  auto it = pages_.find({ns, title});
  return it == pages_.end() ? nullptr : it->second.get();
}

std::optional<Principal> Wiki::principal(const std::string& token) const {
  if (token.empty()) return principalFor(acl_, kAnonymous);
  auto user = tokens_.resolve(token, TokenRegistry::Clock::now());
  if (!user) return std::nullopt;
  return principalFor(acl_, *user);
}

ValidationReport Wiki::freshReport(const Page& page) const {
  auto parsed = parsePage({page.title, page.ns, page.currentText});
  const auto& rev = page.revisions.back();
  if (!parsed.page) {
    return parseFailureReport({page.title, page.ns, page.currentText}, rev.number,
                              parsed.diagnostics, now());
  }
  auto lowered = lowerPage(*parsed.page, rev.number, rev.author, rev.timestamp);
  return checkPage(*parsed.page, lowered, ontology_, &store_, now());
}

// ____________________________________________________________________________
ApiResponse Wiki::login(const std::string& user, const std::string& password) {
  std::shared_lock lock(mutex_);
  auto it = users_.find(user);
  if (it == users_.end() || !verifyPassword(it->second, password)) {
    return error(401, "bad credentials");
  }
  return {200, {{"token", tokens_.issue(user, TokenRegistry::Clock::now())}, {"user", user}}};
}

ApiResponse Wiki::listPages(const std::string& token) const {
  std::shared_lock lock(mutex_);
  auto who = principal(token);
  if (!who) return unauthorized();
  Json list = Json::array();
  for (const auto& [key, page] : pages_) {
    if (!authorize(acl_, *who, Action::Read, Resource::page(page->ns, page->title)).allowed()) {
      continue;
    }
    const auto& rev = page->revisions.back();
    list.push_back({{"namespace", page->ns},
                    {"title", page->title},
                    {"revision", rev.number},
                    {"author", rev.author},
                    {"timestamp", rev.timestamp},
                    {"conforms", rev.report.conforms()}});
  }
  return {200, {{"pages", std::move(list)}}};
}

ApiResponse Wiki::getPage(const std::string& token, const std::string& ns,
                          const std::string& title) {
  std::shared_lock lock(mutex_);
  auto who = principal(token);
  if (!who) return unauthorized();
  auto decision = authorize(acl_, *who, Action::Read, Resource::page(ns, title));
  if (!decision.allowed()) return forbidden(decision, Action::Read);
  Page* page = findPage(ns, title);
  if (!page) return error(404, "no such page");
  const auto& rev = page->revisions.back();

  ValidationReport report = rev.report;
  bool stale = report.ontologyHash != ontology_.contentHash();
  if (stale) {
    std::lock_guard cacheLock(cacheMutex_);
    if (!page->recheck || page->recheck->ontologyHash != ontology_.contentHash()) {
      page->recheck = freshReport(*page);
    }
    report = *page->recheck;
  }
  auto graph = Term::iri(vocab::revisionGraphIri(ns, title, rev.number));
  auto quads = store_.match({std::nullopt, std::nullopt, std::nullopt, graph});
  return {200,
          {{"namespace", ns},
           {"title", title},
           {"text", page->currentText},
           {"revision",
            {{"number", rev.number}, {"author", rev.author}, {"timestamp", rev.timestamp}}},
           {"annotations", quadsJson(quads)},
           {"nquads", nquads(quads)},
           {"report", reportToJson(report)},
           {"report_rechecked", stale}}};
}

ApiResponse Wiki::putPage(const std::string& token, const std::string& ns,
                          const std::string& title, const PutPageRequest& request) {
  std::unique_lock lock(mutex_);
  auto who = principal(token);
  if (!who) return unauthorized();
  auto resource = Resource::page(ns, title);
  auto decision = authorize(acl_, *who, Action::Edit, resource);
  if (!decision.allowed()) return forbidden(decision, Action::Edit);
  if (containsAnnotationBlock(request.text)) {
    auto annotate = authorize(acl_, *who, Action::Annotate, resource);
    if (!annotate.allowed()) return forbidden(annotate, Action::Annotate);
  }
  if (!validNamespace(ns)) return error(400, "invalid namespace");
  if (!isValidTitle(title)) return error(400, "invalid title");
  Page* existing = findPage(ns, title);
  long current = existing ? existing->current() : 0;
  if (request.baseRevision && *request.baseRevision != current) {
    return error(409, "revision conflict", {{"current_revision", current}});
  }

  std::string timestamp = now();
  long number = current + 1;
  auto parsed = parsePage({title, ns, request.text});
  if (!parsed.page) {
    auto report = parseFailureReport({title, ns, request.text}, number, parsed.diagnostics,
                                     timestamp);
    Json diagnostics = Json::array();
    for (const auto& d : parsed.diagnostics) diagnostics.push_back(diagnosticToJson(d));
    return error(400, "parse error",
                 {{"diagnostics", diagnostics}, {"report", reportToJson(report)}});
  }
  auto lowered = lowerPage(*parsed.page, number, who->user, timestamp);
  auto report = checkPage(*parsed.page, lowered, ontology_, &store_, timestamp);
  if (request.strict.value_or(config_.strictDefault) && !report.conforms()) {
    return error(422, "constraint violations", {{"report", reportToJson(report)}});
  }

  Page* page = existing;
  if (!page) {
    auto fresh = std::make_unique<Page>();
    fresh->ns = ns;
    fresh->title = title;
    page = fresh.get();
    pages_[{ns, title}] = std::move(fresh);
  }
  page->revisions.push_back({number, who->user, timestamp, report});
  try {
    writePageFiles(*page, number, request.text);
    writeMeta(*page);
  } catch (...) {
    page->revisions.pop_back();
    if (!existing) pages_.erase({ns, title});
    throw;
  }
  if (current > 0) {
    Term oldGraph = Term::iri(vocab::revisionGraphIri(ns, title, current));
    store_.dropGraph(oldGraph);
    for (const auto& q :
         store_.match({oldGraph, std::nullopt, std::nullopt, Term::iri(vocab::metaGraphIri())})) {
      store_.remove(q);
    }
  }
  page->currentText = request.text;
  {
    std::lock_guard cacheLock(cacheMutex_);
    page->recheck.reset();
  }
  indexPage(*page, store_);
  recomputeInferred(store_);
  return {200, {{"namespace", ns},
                {"title", title},
                {"revision", number},
                {"report", reportToJson(report)}}};
}

ApiResponse Wiki::listRevisions(const std::string& token, const std::string& ns,
                                const std::string& title) const {
  std::shared_lock lock(mutex_);
  auto who = principal(token);
  if (!who) return unauthorized();
  auto decision = authorize(acl_, *who, Action::Read, Resource::page(ns, title));
  if (!decision.allowed()) return forbidden(decision, Action::Read);
  const Page* page = findPage(ns, title);
  if (!page) return error(404, "no such page");
  Json list = Json::array();
  for (auto it = page->revisions.rbegin(); it != page->revisions.rend(); ++it) {
    list.push_back({{"number", it->number},
                    {"author", it->author},
                    {"timestamp", it->timestamp},
                    {"conforms", it->report.conforms()},
                    {"violations", it->report.violations.size()}});
  }
  return {200, {{"namespace", ns}, {"title", title}, {"revisions", std::move(list)}}};
}

ApiResponse Wiki::getRevision(const std::string& token, const std::string& ns,
                              const std::string& title, long number) const {
  std::shared_lock lock(mutex_);
  auto who = principal(token);
  if (!who) return unauthorized();
  auto decision = authorize(acl_, *who, Action::Read, Resource::page(ns, title));
  if (!decision.allowed()) return forbidden(decision, Action::Read);
  const Page* page = findPage(ns, title);
  if (!page) return error(404, "no such page");
  if (number < 1 || number > page->current()) return error(404, "no such revision");
  const auto& rev = page->revisions[static_cast<std::size_t>(number - 1)];
  return {200,
          {{"namespace", ns},
           {"title", title},
           {"number", rev.number},
           {"author", rev.author},
           {"timestamp", rev.timestamp},
           {"text", readRevisionText(*page, number)},
           {"report", reportToJson(rev.report)}}};
}

ApiResponse Wiki::getAnnotations(const std::string& token, const std::string& ns,
                                 const std::string& title) const {
  std::shared_lock lock(mutex_);
  auto who = principal(token);
  if (!who) return unauthorized();
  auto decision = authorize(acl_, *who, Action::Read, Resource::page(ns, title));
  if (!decision.allowed()) return forbidden(decision, Action::Read);
  const Page* page = findPage(ns, title);
  if (!page) return error(404, "no such page");
  auto graph = Term::iri(vocab::revisionGraphIri(ns, title, page->current()));
  auto quads = store_.match({std::nullopt, std::nullopt, std::nullopt, graph});
  auto meta = store_.match({graph, std::nullopt, std::nullopt, Term::iri(vocab::metaGraphIri())});
  return {200,
          {{"namespace", ns},
           {"title", title},
           {"graph", graph.value},
           {"quads", quadsJson(quads)},
           {"meta", quadsJson(meta)},
           {"nquads", nquads(quads)}}};
}

ApiResponse Wiki::check(const std::string& token, const Json& body) const {
  std::shared_lock lock(mutex_);
  auto who = principal(token);
  if (!who) return unauthorized();
  if (!body.is_object()) return error(400, "expected a JSON object");
  auto field = [&](const char* name) -> std::optional<std::string> {
    if (!body.contains(name) || !body[name].is_string()) return std::nullopt;
    return body[name].get<std::string>();
  };
  std::string ns = field("namespace").value_or(std::string(vocab::kDefaultNamespace));
  auto title = field("title");
  auto text = field("text");
  if (!title && !text) return error(400, "expected 'text' or 'title'");
  if (!validNamespace(ns)) return error(400, "invalid namespace");
  if (title && !isValidTitle(*title)) return error(400, "invalid title");
  auto resource = title ? Resource::page(ns, *title) : Resource::nameSpace(ns);
  auto decision = authorize(acl_, *who, Action::Annotate, resource);
  if (!decision.allowed()) return forbidden(decision, Action::Annotate);
  if (!text) {
    const Page* page = findPage(ns, *title);
    if (!page) return error(404, "no such page");
    text = page->currentText;
  }
  PageSource source{title.value_or("Check"), ns, *text};
  std::string timestamp = now();
  auto parsed = parsePage(source);
  if (!parsed.page) {
    return error(400, "parse error",
                 {{"report", reportToJson(parseFailureReport(source, 0, parsed.diagnostics,
                                                             timestamp))}});
  }
  auto lowered = lowerPage(*parsed.page, 0, who->user, timestamp);
  auto report = checkPage(*parsed.page, lowered, ontology_, &store_, timestamp);
  return {200, {{"report", reportToJson(report)}}};
}

ApiResponse Wiki::sparql(const std::string& token, const std::string& query,
                         bool entailment) const {
  std::shared_lock lock(mutex_);
  auto who = principal(token);
  if (!who) return unauthorized();
  auto decision = authorize(acl_, *who, Action::Query, Resource::global());
  if (!decision.allowed()) return forbidden(decision, Action::Query);
  auto parsed = parseQuery(query);
  if (!parsed.query) {
    const auto& e = *parsed.error;
    return error(400, e.message,
                 {{"kind", e.kind == QueryErrorKind::UnknownPrefix ? "UnknownPrefix"
                                                                   : "QuerySyntaxError"},
                  {"offset", e.offset}});
  }
  auto result = evaluate(*parsed.query, store_, entailment);
  Json body = resultsToJson(result);
  body["diagnostics"] = {{"type_errors", result.typeErrors}};
  return {200, std::move(body)};
}

ApiResponse Wiki::getOntology(const std::string& token) const {
  std::shared_lock lock(mutex_);
  auto who = principal(token);
  if (!who) return unauthorized();
  auto decision = authorize(acl_, *who, Action::Read, Resource::global());
  if (!decision.allowed()) return forbidden(decision, Action::Read);
  Json classes = Json::array();
  for (const auto& c : ontology_.classes()) {
    Json supers = Json::array();
    for (const auto& [sub, super] : ontology_.subclassEdges()) {
      if (sub == c) supers.push_back(super);
    }
    classes.push_back({{"name", c}, {"subclass_of", supers}});
  }
  Json properties = Json::array();
  for (const auto& [name, p] : ontology_.properties()) {
    Json j = {{"name", name},
              {"kind", p.kind == PropertyKind::Data ? "datatype" : "object"},
              {"domain", p.domain},
              {"range", p.range},
              {"min", p.minCard}};
    j["max"] = p.maxCard ? Json(*p.maxCard) : Json();
    properties.push_back(std::move(j));
  }
  Json relations = Json::array();
  for (const auto& [name, r] : ontology_.relations()) {
    Json roles = Json::array();
    for (const auto& role : r.roles) {
      roles.push_back({{"name", role.name}, {"filler", role.filler}, {"required", role.required}});
    }
    relations.push_back({{"name", name}, {"roles", roles}});
  }
  Json rules = Json::array();
  for (const auto& r : ontology_.rules()) rules.push_back(r.name);
  return {200,
          {{"text", renderOntology(ontology_)},
           {"hash", ontology_.contentHash()},
           {"classes", classes},
           {"properties", properties},
           {"relations", relations},
           {"rules", rules}}};
}

ApiResponse Wiki::putOntology(const std::string& token, const std::string& text) {
  std::unique_lock lock(mutex_);
  auto who = principal(token);
  if (!who) return unauthorized();
  auto decision = authorize(acl_, *who, Action::Admin, Resource::global());
  if (!decision.allowed()) return forbidden(decision, Action::Admin);
  auto loaded = loadOntology(text);
  if (!loaded.ok()) {
    return error(422, "ontology rejected", {{"errors", ontologyErrorsJson(loaded.errors)}});
  }
  writeFileAtomic(config_.dataDir / "ontology.wbo", text);
  ontology_ = std::move(*loaded.ontology);
  recomputeInferred(store_);
  Json warnings = Json::array();
  for (const auto& w : validateOntology(ontology_)) {
    warnings.push_back({{"kind", w.kind == OntologyWarningKind::Cycle ? "Cycle" : "UnusedClass"},
                        {"classes", w.classes},
                        {"message", w.message}});
  }
  return {200, {{"hash", ontology_.contentHash()}, {"warnings", warnings}}};
}

// ____________________________________________________________________________
std::string Wiki::exportNQuads() const {
  std::shared_lock lock(mutex_);
  return store_.exportNQuads();
}

QueryResult Wiki::evaluateQuery(const Query& query, bool entailment) const {
  std::shared_lock lock(mutex_);
  return evaluate(query, store_, entailment);
}

std::string Wiki::rederivedExport() const {
  WikiConfig config = config_;
  return Wiki(config).exportNQuads();
}

std::size_t Wiki::pageCount() const {
  std::shared_lock lock(mutex_);
  return pages_.size();
}

std::size_t Wiki::quadCount() const {
  std::shared_lock lock(mutex_);
  return store_.size();
}

ImportSummary Wiki::importPages(const std::vector<ImportedPage>& pages, const std::string& author,
                                const std::optional<std::string>& timestamp) {
  std::unique_lock lock(mutex_);
  ImportSummary summary;
  std::string ts = timestamp.value_or(now());
  std::vector<Page*> imported;
  for (const auto& in : pages) {
    std::string label = in.ns + ":" + in.title;
    if (!validNamespace(in.ns)) {
      summary.failed.push_back({label, "invalid namespace"});
      continue;
    }
    if (!isValidTitle(in.title)) {
      summary.failed.push_back({label, "invalid title"});
      continue;
    }
    auto parsed = parsePage({in.title, in.ns, in.text});
    if (!parsed.page) {
      const auto& d = parsed.diagnostics.front();
      summary.failed.push_back({label, std::string(parseErrorKindName(d.kind)) + " at byte " +
                                           std::to_string(d.span.start) + ": " + d.message});
      continue;
    }
    Page* page = findPage(in.ns, in.title);
    long current = page ? page->current() : 0;
    if (!page) {
      auto fresh = std::make_unique<Page>();
      fresh->ns = in.ns;
      fresh->title = in.title;
      page = fresh.get();
      pages_[{in.ns, in.title}] = std::move(fresh);
    } else {
      Term oldGraph = Term::iri(vocab::revisionGraphIri(in.ns, in.title, current));
      store_.dropGraph(oldGraph);
      for (const auto& q : store_.match(
               {oldGraph, std::nullopt, std::nullopt, Term::iri(vocab::metaGraphIri())})) {
        store_.remove(q);
      }
    }
    page->revisions.push_back({current + 1, author, ts, {}});
    page->currentText = in.text;
    page->recheck.reset();
    writePageFiles(*page, current + 1, in.text);
    indexPage(*page, store_);
    if (std::find(imported.begin(), imported.end(), page) == imported.end()) {
      imported.push_back(page);
    }
  }
  recomputeInferred(store_);
  for (Page* page : imported) {
    auto& rev = page->revisions.back();
    auto parsed = parsePage({page->title, page->ns, page->currentText});
    auto lowered = lowerPage(*parsed.page, rev.number, rev.author, rev.timestamp);
    rev.report = checkPage(*parsed.page, lowered, ontology_, &store_, ts);
    summary.violations += rev.report.violations.size();
    summary.reports.push_back(rev.report);
    writeMeta(*page);
  }
  summary.pages = imported.size();
  return summary;
}

}  // namespace wikibridge
