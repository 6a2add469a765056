#include "wikibridge/vocabulary.hpp"

#include "wikibridge/text.hpp"

namespace wikibridge::vocab {

namespace {

std::string base(std::string_view rest) {
  std::string out(kBase);
  out += rest;
  return out;
}

}  // namespace

std::string pageKey(std::string_view ns, std::string_view title) {
  if (ns == kDefaultNamespace) return percentEncode(title);
  return percentEncode(ns) + ":" + percentEncode(title);
}

std::string pageIri(std::string_view ns, std::string_view title) {
  return base("page/") + pageKey(ns, title);
}

std::optional<std::pair<std::string, std::string>> pageFromIri(std::string_view iri) {
  std::string prefix = base("page/");
  if (!iri.starts_with(prefix)) return std::nullopt;
  std::string_view key = iri.substr(prefix.size());
  std::string ns(kDefaultNamespace);
  std::string_view titlePart = key;
  if (auto colon = key.find(':'); colon != std::string_view::npos) {
    auto decodedNs = percentDecode(key.substr(0, colon));
    if (!decodedNs) return std::nullopt;
    ns = *decodedNs;
    titlePart = key.substr(colon + 1);
  }
  auto title = percentDecode(titlePart);
  if (!title || title->empty()) return std::nullopt;
  return std::make_pair(ns, *title);
}

std::string ontoIri(std::string_view name) { return base("onto/") + percentEncode(name); }
std::string relIri(std::string_view relation) { return base("rel/") + percentEncode(relation); }

std::string revisionGraphIri(std::string_view ns, std::string_view title, long revision) {
  return base("graph/") + pageKey(ns, title) + "/" + std::to_string(revision);
}

std::string metaGraphIri() { return base("graph/meta"); }
std::string inferredGraphIri() { return base("graph/inferred"); }
std::string metaPredicateIri(std::string_view name) { return base("meta/") + std::string(name); }

std::optional<std::string> ontoName(std::string_view iri) {
  std::string prefix = base("onto/");
  if (!iri.starts_with(prefix)) return std::nullopt;
  return percentDecode(iri.substr(prefix.size()));
}

bool isRevisionGraph(std::string_view iri) {
  std::string prefix = base("graph/");
  if (!iri.starts_with(prefix)) return false;
  std::string_view rest = iri.substr(prefix.size());
  return rest != "meta" && rest != "inferred" && rest.find('/') != std::string_view::npos;
}

bool isMetaPredicate(std::string_view iri) { return iri.starts_with(base("meta/")); }

const std::map<std::string, std::string>& standardPrefixes() {
  static const std::map<std::string, std::string> kPrefixes = {
      {"wb", std::string(kBase)},
      {"rdf", std::string(kRdf)},
      {"rdfs", std::string(kRdfs)},
      {"xsd", std::string(kXsd)},
  };
  return kPrefixes;
}

bool isPlainLocalName(std::string_view local) {
  if (local.empty() || local.back() == '.') return false;
  for (char c : local) {
    bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
              c == '_' || c == '-' || c == '.' || c == '/' || c == '%';
    if (!ok) return false;
  }
  return true;
}

std::string compactIri(std::string_view iri) {
  for (const auto& [prefix, ns] : standardPrefixes()) {
    if (iri.starts_with(ns) && isPlainLocalName(iri.substr(ns.size()))) {
      return prefix + ":" + std::string(iri.substr(ns.size()));
    }
  }
  return "<" + std::string(iri) + ">";
}

}  // namespace wikibridge::vocab
