#include "wikibridge/http_server.hpp"

#include <httplib.h>

namespace wikibridge {

struct HttpServer::Impl {
  Wiki& wiki;
  httplib::Server server;
  int port = -1;

  explicit Impl(Wiki& w) : wiki(w) {}
};

namespace {

std::string bearer(const httplib::Request& req) {
  auto header = req.get_header_value("Authorization");
  constexpr std::string_view kPrefix = "Bearer ";
  if (header.size() > kPrefix.size() && header.compare(0, kPrefix.size(), kPrefix) == 0) {
    return header.substr(kPrefix.size());
  }
  return {};
}

void send(httplib::Response& res, const ApiResponse& api) {
  res.status = api.status;
  res.set_content(api.body.dump(), "application/json");
}

std::optional<Json> jsonBody(const httplib::Request& req, httplib::Response& res) {
  try {
    return Json::parse(req.body);
  } catch (const Json::exception&) {
    send(res, {400, {{"error", "malformed JSON body"}}});
    return std::nullopt;
  }
}

bool isMediaType(const httplib::Request& req, std::string_view type) {
  auto ct = req.get_header_value("Content-Type");
  return ct.compare(0, type.size(), type) == 0;
}

}  // namespace

HttpServer::HttpServer(Wiki& wiki, std::optional<std::filesystem::path> staticDir)
    : impl_(std::make_unique<Impl>(wiki)) {
  auto& s = impl_->server;
  Wiki& w = wiki;
  const std::string page = R"(/api/pages/([^/]+)/([^/]+))";

  s.Post("/api/login", [&w](const httplib::Request& req, httplib::Response& res) {
    auto body = jsonBody(req, res);
    if (!body) return;
    if (!body->is_object() || !body->contains("user") || !body->contains("password") ||
        !(*body)["user"].is_string() || !(*body)["password"].is_string()) {
      return send(res, {400, {{"error", "expected {\"user\", \"password\"}"}}});
    }
    send(res, w.login((*body)["user"], (*body)["password"]));
  });

  s.Get("/api/pages", [&w](const httplib::Request& req, httplib::Response& res) {
    send(res, w.listPages(bearer(req)));
  });

  s.Get(page, [&w](const httplib::Request& req, httplib::Response& res) {
    send(res, w.getPage(bearer(req), req.matches[1], req.matches[2]));
  });

  s.Put(page, [&w](const httplib::Request& req, httplib::Response& res) {
    auto body = jsonBody(req, res);
    if (!body) return;
    if (!body->is_object() || !body->contains("text") || !(*body)["text"].is_string()) {
      return send(res, {400, {{"error", "expected {\"text\": ...}"}}});
    }
    PutPageRequest put;
    put.text = (*body)["text"];
    if (body->contains("base_revision") && !(*body)["base_revision"].is_null()) {
      if (!(*body)["base_revision"].is_number_integer()) {
        return send(res, {400, {{"error", "base_revision must be an integer"}}});
      }
      put.baseRevision = (*body)["base_revision"].get<long>();
    }
    if (body->contains("mode")) {
      const auto& mode = (*body)["mode"];
      if (mode == "strict") {
        put.strict = true;
      } else if (mode == "lenient") {
        put.strict = false;
      } else {
        return send(res, {400, {{"error", "mode must be \"strict\" or \"lenient\""}}});
      }
    }
    send(res, w.putPage(bearer(req), req.matches[1], req.matches[2], put));
  });

  s.Get(page + "/revisions", [&w](const httplib::Request& req, httplib::Response& res) {
    send(res, w.listRevisions(bearer(req), req.matches[1], req.matches[2]));
  });

  s.Get(page + R"(/revisions/(-?\d{1,18}))",
        [&w](const httplib::Request& req, httplib::Response& res) {
          send(res, w.getRevision(bearer(req), req.matches[1], req.matches[2],
                                  std::stol(req.matches[3])));
        });

  s.Get(page + "/annotations", [&w](const httplib::Request& req, httplib::Response& res) {
    send(res, w.getAnnotations(bearer(req), req.matches[1], req.matches[2]));
  });

  s.Post("/api/check", [&w](const httplib::Request& req, httplib::Response& res) {
    auto body = jsonBody(req, res);
    if (!body) return;
    send(res, w.check(bearer(req), *body));
  });

  s.Post("/api/sparql", [&w](const httplib::Request& req, httplib::Response& res) {
    if (isMediaType(req, "application/sparql-query")) {
      bool entailment = req.get_param_value("entailment") == "true";
      return send(res, w.sparql(bearer(req), req.body, entailment));
    }
    auto body = jsonBody(req, res);
    if (!body) return;
    if (!body->is_object() || !body->contains("query") || !(*body)["query"].is_string()) {
      return send(res, {400, {{"error", "expected {\"query\": ...}"}}});
    }
    bool entailment = body->value("entailment", false);
    send(res, w.sparql(bearer(req), (*body)["query"], entailment));
  });

  s.Get("/api/ontology", [&w](const httplib::Request& req, httplib::Response& res) {
    send(res, w.getOntology(bearer(req)));
  });

  s.Put("/api/ontology", [&w](const httplib::Request& req, httplib::Response& res) {
    send(res, w.putOntology(bearer(req), req.body));
  });

  s.set_exception_handler(
      [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string what = "internal error";
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          what = e.what();
        } catch (...) {
        }
        send(res, {500, {{"error", what}}});
      });

  if (staticDir) s.set_mount_point("/", staticDir->string());
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  auto& s = impl_->server;
  if (port == 0) {
    impl_->port = s.bind_to_any_port(host);
  } else {
    impl_->port = s.bind_to_port(host, port) ? port : -1;
  }
  return impl_->port;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

}  // namespace wikibridge
