#pragma once

// HTTP transport for Wiki. Routes:
//   POST /api/login                              {"user", "password"}
//   GET  /api/pages
//   GET  /api/pages/{ns}/{title}
//   PUT  /api/pages/{ns}/{title}                 {"text", "base_revision"?, "mode"?}
//   GET  /api/pages/{ns}/{title}/revisions
//   GET  /api/pages/{ns}/{title}/revisions/{n}
//   GET  /api/pages/{ns}/{title}/annotations
//   POST /api/check                              {"text"} | {"title"}
//   POST /api/sparql                             {"query", "entailment"?} or application/sparql-query
//   GET|PUT /api/ontology                        PUT body is the DSL text
// Path segments are percent-decoded. Auth: `Authorization: Bearer <token>`.

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "wikibridge/wiki.hpp"

namespace wikibridge {

class HttpServer {
 public:
  // `staticDir`, when set, is served at `/` (the web front end bundle).
  HttpServer(Wiki& wiki, std::optional<std::filesystem::path> staticDir = std::nullopt);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds to host:port (port 0 picks a free one) and returns the bound port,
  // or -1 on failure. Does not block.
  int bind(const std::string& host, int port);
  // Serves until stop(); blocks.
  bool listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace wikibridge
