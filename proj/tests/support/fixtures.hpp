#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "wikibridge/markup.hpp"
#include "wikibridge/ontology.hpp"

namespace fixtures {

std::filesystem::path dir();  // tests/fixtures

std::string readFile(const std::filesystem::path& path);
void writeFile(const std::filesystem::path& path, const std::string& text);

// *.wiki files of `root`: top-level files are in Main, subdirectories name
// their namespace, titles are the percent-decoded stems. Sorted by (ns, title).
std::vector<wikibridge::PageSource> loadPages(const std::filesystem::path& root);

wikibridge::Ontology heritageOntology();
std::string heritageOntologyText();
std::vector<wikibridge::PageSource> heritagePages();

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace fixtures
