#pragma once

// The wiki service without its HTTP transport: revisioned page storage on
// disk, the derived quad store, checking, querying, authentication and
// authorization. Every operation returns the status code and JSON body the
// HTTP layer sends unchanged.
//
// Data directory:
//   ontology.wbo  acl.conf  users.auth  export.nq
//   pages/<ns>/<title>/<n>.wiki  pages/<ns>/<title>/meta.json
// Directory names are percent-encoded. The page tree is the source of truth;
// the store is rebuilt from it on open.

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wikibridge/access.hpp"
#include "wikibridge/auth.hpp"
#include "wikibridge/json.hpp"
#include "wikibridge/ontology.hpp"
#include "wikibridge/query.hpp"
#include "wikibridge/semantics.hpp"
#include "wikibridge/store.hpp"

namespace wikibridge {

struct WikiConfig {
  std::filesystem::path dataDir = "data";
  bool strictDefault = false;
  std::chrono::seconds tokenTtl = std::chrono::hours(24);
  // UTC ISO-8601 timestamp for new revisions; system clock when empty.
  std::function<std::string()> clock;
};

// Raised when the data directory cannot be loaded.
class WikiError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ApiResponse {
  int status = 200;
  Json body;
};

struct PutPageRequest {
  std::string text;
  std::optional<long> baseRevision;
  std::optional<bool> strict;  // falls back to WikiConfig::strictDefault
};

struct ImportedPage {
  std::string ns = "Main";
  std::string title;
  std::string text;
};

struct ImportSummary {
  std::size_t pages = 0;
  std::size_t violations = 0;
  std::vector<ValidationReport> reports;           // one per imported page
  std::vector<std::pair<std::string, std::string>> failed;  // (ns:title, reason)
};

// Fresh data directory: acl.conf with the role presets,
// empty ontology, empty users.auth. Existing files are kept.
void initDataDir(const std::filesystem::path& dir);

// Current UTC time as YYYY-MM-DDThh:mm:ssZ.
std::string utcNow();

class Wiki {
 public:
  explicit Wiki(WikiConfig config);  // throws WikiError
  ~Wiki();
  Wiki(const Wiki&) = delete;
  Wiki& operator=(const Wiki&) = delete;

  // An empty token is the anonymous principal; an unknown or expired one is 401.
  ApiResponse login(const std::string& user, const std::string& password);
  ApiResponse listPages(const std::string& token) const;
  ApiResponse getPage(const std::string& token, const std::string& ns, const std::string& title);
  ApiResponse putPage(const std::string& token, const std::string& ns, const std::string& title,
                      const PutPageRequest& request);
  ApiResponse listRevisions(const std::string& token, const std::string& ns,
                            const std::string& title) const;
  ApiResponse getRevision(const std::string& token, const std::string& ns,
                          const std::string& title, long number) const;
  ApiResponse getAnnotations(const std::string& token, const std::string& ns,
                             const std::string& title) const;
  // body: {"text": ..., "title"?: ..., "namespace"?: ...} or {"title": ...}
  ApiResponse check(const std::string& token, const Json& body) const;
  ApiResponse sparql(const std::string& token, const std::string& query, bool entailment) const;
  ApiResponse getOntology(const std::string& token) const;
  ApiResponse putOntology(const std::string& token, const std::string& text);

  // Operational entry points (no authorization).
  std::string exportNQuads() const;
  QueryResult evaluateQuery(const Query& query, bool entailment) const;
  ImportSummary importPages(const std::vector<ImportedPage>& pages, const std::string& author,
                            const std::optional<std::string>& timestamp);
  // Export of a store re-derived from the page tree alone.
  std::string rederivedExport() const;
  std::size_t pageCount() const;
  std::size_t quadCount() const;
  const std::filesystem::path& dataDir() const { return config_.dataDir; }

 private:
  struct Page;

  std::optional<Principal> principal(const std::string& token) const;
  std::string now() const;
  void loadFromDisk();
  void loadPageDir(const std::filesystem::path& dir);
  void indexPage(Page& page, QuadStore& store) const;
  void recomputeInferred(QuadStore& store) const;
  void writePageFiles(const Page& page, long number, const std::string& text) const;
  void writeMeta(const Page& page) const;
  std::string readRevisionText(const Page& page, long number) const;
  Page* findPage(const std::string& ns, const std::string& title) const;
  ValidationReport freshReport(const Page& page) const;

  WikiConfig config_;
  mutable std::shared_mutex mutex_;
  mutable std::mutex cacheMutex_;
  Ontology ontology_;
  AclConfig acl_;
  std::map<std::string, std::string> users_;
  mutable TokenRegistry tokens_;
  QuadStore store_;
  std::map<std::pair<std::string, std::string>, std::unique_ptr<Page>> pages_;
};

}  // namespace wikibridge
