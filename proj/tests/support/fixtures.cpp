#include "fixtures.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <tuple>
#include <stdexcept>

#include "wikibridge/text.hpp"

namespace fixtures {

namespace fs = std::filesystem;

fs::path dir() { return WIKIBRIDGE_FIXTURE_DIR; }

std::string readFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void writeFile(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::vector<wikibridge::PageSource> loadPages(const fs::path& root) {
  std::vector<wikibridge::PageSource> pages;
  auto add = [&](const fs::path& file, const std::string& ns) {
    auto title = wikibridge::percentDecode(file.stem().string());
    if (!title) throw std::runtime_error("bad file name " + file.string());
    pages.push_back({*title, ns, readFile(file)});
  };
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) {
      for (const auto& inner : fs::directory_iterator(entry.path())) {
        if (inner.path().extension() == ".wiki") add(inner.path(), entry.path().filename().string());
      }
    } else if (entry.path().extension() == ".wiki") {
      add(entry.path(), "Main");
    }
  }
  std::sort(pages.begin(), pages.end(), [](const auto& a, const auto& b) {
    return std::tie(a.ns, a.title) < std::tie(b.ns, b.title);
  });
  return pages;
}

std::string heritageOntologyText() { return readFile(dir() / "heritage" / "ontology.wbo"); }

wikibridge::Ontology heritageOntology() {
  auto loaded = wikibridge::loadOntology(heritageOntologyText());
  if (!loaded.ok()) throw std::runtime_error("heritage ontology does not load");
  return *loaded.ontology;
}

std::vector<wikibridge::PageSource> heritagePages() {
  return loadPages(dir() / "heritage" / "pages");
}

TempDir::TempDir() {
  std::random_device rd;
  for (;;) {
    path_ = fs::temp_directory_path() / ("wikibridge-test-" + std::to_string(rd()));
    if (fs::create_directory(path_)) break;
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

}  // namespace fixtures
