#include "generators.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>

#include "wikibridge/vocabulary.hpp"

namespace gen {

using namespace wikibridge;

namespace {

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

template <typename T, std::size_t N>
const T& pick(Rng& rng, const std::array<T, N>& items) {
  return items[uniform(rng, 0, N - 1)];
}

const std::array<std::string, 9> kKeys = {"type", "label", "note", "height", "year",
                                          "k1",   "_x",    "dating", "partOf"};
const std::array<std::string, 4> kRelations = {"Dating", "Restoration", "R", "Rel_2"};
const std::array<std::string, 5> kClasses = {"Church", "Building", "Place", "C_1", "x9"};
const std::array<std::string, 6> kTitles = {"Colmar", "St Martin", "Ünterlinden",
                                            "A:B", "Page (2)", "x"};

// Pieces of string lexical forms, chosen to exercise escaping and look-alikes.
const std::array<std::string, 16> kStringPieces = {
    "abc", " ", "\"", "\\", "}}", "{{#ann: x=1}}", "|", "=", "[[Colmar]]", "12", "2024-01-01",
    "true", "é", "日本", "\n", "^^integer"};

const std::array<std::string, 14> kPlainPieces = {
    "Some text", " ", "\n", "[[Link]]", "{", "}", "}}", "{{", "|", "=", "\"q\"", "ü", "#",
    "'''bold'''"};

std::string randomString(Rng& rng) {
  std::string s;
  for (std::size_t n = uniform(rng, 0, 4); n > 0; --n) s += pick(rng, kStringPieces);
  return s;
}

std::string randomDigits(Rng& rng, std::size_t lo, std::size_t hi) {
  std::string s;
  for (std::size_t n = uniform(rng, lo, hi); n > 0; --n) s.push_back('0' + uniform(rng, 0, 9));
  return s;
}

std::string sign(Rng& rng) {
  switch (uniform(rng, 0, 3)) {
    case 0: return "-";
    case 1: return "+";
    default: return "";
  }
}

LiteralValue randomLiteral(Rng& rng, const std::string& key) {
  switch (uniform(rng, 0, 7)) {
    case 0: return {sign(rng) + randomDigits(rng, 1, 6), Datatype::Integer};
    case 1:
      return {sign(rng) + randomDigits(rng, 1, 4) + "." + randomDigits(rng, 1, 3),
              Datatype::Decimal};
    case 2: return {sign(rng) + randomDigits(rng, 1, 4), Datatype::Decimal};
    case 3: return {chance(rng, 0.5) ? "true" : "false", Datatype::Boolean};
    case 4: {
      char buf[16];
      std::snprintf(buf, sizeof buf, "%04zu-%02zu-%02zu", uniform(rng, 1000, 2999),
                    uniform(rng, 1, 12), uniform(rng, 1, 28));
      return {buf, Datatype::Date};
    }
    case 5:
      if (key == "type") return {pick(rng, kClasses), Datatype::String};
      return {randomString(rng), Datatype::String};
    default: return {randomString(rng), Datatype::String};
  }
}

bool isIdent(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) {
    return false;
  }
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out + "\"";
}

AnnotationNode tree(Rng& rng, const TreeOptions& options, int depth) {
  AnnotationNode node;
  if (chance(rng, 0.4)) {
    node.kind = AnnotationKind::NAry;
    node.relation = pick(rng, kRelations);
  }
  for (std::size_t n = uniform(rng, 1, options.maxPairs); n > 0; --n) {
    Pair pair{pick(rng, kKeys), LiteralValue{}, {}};
    if (depth < options.maxDepth && chance(rng, options.nestProbability)) {
      pair.value = Nested(tree(rng, options, depth + 1));
    } else if (chance(rng, 0.15)) {
      pair.value = PageRef{pick(rng, kTitles)};
    } else {
      pair.value = randomLiteral(rng, pair.key);
    }
    node.pairs.push_back(std::move(pair));
  }
  return node;
}

std::string valueText(const std::string& key, const Value& value) {
  if (auto* ref = std::get_if<PageRef>(&value)) return "[[" + ref->title + "]]";
  if (auto* nested = std::get_if<Nested>(&value)) return canonicalText(nested->node());
  const auto& lit = std::get<LiteralValue>(value);
  switch (lit.datatype) {
    case Datatype::String:
      if (key == "type" && isIdent(lit.lexical) && lit.lexical != "true" &&
          lit.lexical != "false") {
        return lit.lexical;
      }
      return quoted(lit.lexical);
    case Datatype::Decimal:
      if (lit.lexical.find('.') == std::string::npos) return quoted(lit.lexical) + "^^decimal";
      return lit.lexical;
    default: return lit.lexical;
  }
}

std::string plainText(Rng& rng) {
  std::string s;
  for (std::size_t n = uniform(rng, 1, 6); n > 0; --n) s += pick(rng, kPlainPieces);
  for (auto at = s.find("{{#"); at != std::string::npos; at = s.find("{{#")) s[at + 2] = '.';
  return s;
}

}  // namespace

AnnotationNode randomTree(Rng& rng, const TreeOptions& options) { return tree(rng, options, 1); }

std::string canonicalText(const AnnotationNode& node) {
  std::string out = node.kind == AnnotationKind::NAry ? "{{#rel: " + node.relation + " | "
                                                      : std::string("{{#ann: ");
  for (std::size_t i = 0; i < node.pairs.size(); ++i) {
    if (i > 0) out += " | ";
    out += node.pairs[i].key + "=" + valueText(node.pairs[i].key, node.pairs[i].value);
  }
  return out + "}}";
}

CanonicalPage randomCanonicalPage(Rng& rng, std::string title, std::size_t maxBlocks) {
  CanonicalPage page;
  page.source.title = std::move(title);
  TreeOptions options;
  options.nestProbability = 0.2;
  std::size_t blocks = uniform(rng, 0, maxBlocks);
  if (chance(rng, 0.7)) page.source.text += plainText(rng);
  for (std::size_t i = 0; i < blocks; ++i) {
    page.trees.push_back(randomTree(rng, options));
    page.source.text += canonicalText(page.trees.back());
    if (chance(rng, 0.7)) page.source.text += plainText(rng);
  }
  return page;
}

std::string fuzzInput(Rng& rng) {
  static const std::array<std::string, 14> kTokens = {
      "{{#ann:", "{{#rel:", "{{#", "}}", "|", "=", "\"", "\\", "[[", "]]", "^^", "x", " ", "1.5"};
  std::string s;
  if (chance(rng, 0.5)) {
    for (std::size_t n = uniform(rng, 0, 40); n > 0; --n) {
      if (chance(rng, 0.5)) {
        s += pick(rng, kTokens);
      } else {
        s.push_back(static_cast<char>(uniform(rng, 0, 255)));
      }
    }
    return s;
  }
  s = randomCanonicalPage(rng, "Fuzz", 3).source.text;
  for (std::size_t n = uniform(rng, 1, 4); n > 0 && !s.empty(); --n) {
    std::size_t at = uniform(rng, 0, s.size() - 1);
    switch (uniform(rng, 0, 2)) {
      case 0: s.erase(at, uniform(rng, 1, 3)); break;
      case 1: s.insert(at, pick(rng, kTokens)); break;
      default: s[at] = static_cast<char>(uniform(rng, 0, 255)); break;
    }
  }
  return s;
}

// ____________________________________________________________________________
RandomOntology randomOntology(Rng& rng, std::size_t maxClasses, std::size_t maxEdges) {
  RandomOntology o;
  std::size_t n = uniform(rng, 1, maxClasses);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("C" + std::to_string(i));
  o.classes.insert(names.begin(), names.end());
  std::size_t edges = n > 1 ? uniform(rng, 0, std::min(maxEdges, n * (n - 1))) : 0;
  while (o.edges.size() < edges) {
    auto a = names[uniform(rng, 0, n - 1)];
    auto b = names[uniform(rng, 0, n - 1)];
    if (a != b) o.edges.insert({a, b});
  }
  for (const auto& c : names) {
    o.text += "class " + c;
    std::string supers;
    for (const auto& [sub, super] : o.edges) {
      if (sub == c) supers += (supers.empty() ? "" : ", ") + super;
    }
    if (!supers.empty()) o.text += " subclassof " + supers;
    o.text += "\n";
  }
  return o;
}

std::vector<Quad> randomInstances(Rng& rng, const RandomOntology& ontology,
                                  std::size_t maxQuads) {
  std::vector<std::string> classes(ontology.classes.begin(), ontology.classes.end());
  classes.push_back("Undeclared");
  const Term type = Term::iri(std::string(vocab::kRdfType));
  std::vector<Quad> out;
  for (std::size_t n = uniform(rng, 0, maxQuads); n > 0; --n) {
    std::size_t page = uniform(rng, 0, 4);
    Term subject = chance(rng, 0.7) ? Term::iri(vocab::pageIri("Main", "P" + std::to_string(page)))
                                    : Term::blank("b" + std::to_string(uniform(rng, 0, 3)));
    Term graph = Term::iri(vocab::revisionGraphIri("Main", "P" + std::to_string(page),
                                                   static_cast<long>(uniform(rng, 1, 2))));
    if (chance(rng, 0.8)) {
      out.push_back({subject, type, Term::iri(vocab::ontoIri(classes[uniform(rng, 0, classes.size() - 1)])), graph});
    } else {
      out.push_back({subject, Term::iri(vocab::ontoIri("label")),
                     Term::literal("L" + std::to_string(uniform(rng, 0, 3))), graph});
    }
  }
  return out;
}

// ____________________________________________________________________________
namespace {

const std::array<Term, 5> kSubjects = {
    Term::iri(vocab::pageIri("Main", "S0")), Term::iri(vocab::pageIri("Main", "S1")),
    Term::iri(vocab::pageIri("Main", "S2")), Term::iri(vocab::pageIri("Archive", "S3")),
    Term::blank("n1")};
const std::array<Term, 3> kPredicates = {Term::iri(vocab::ontoIri("p")),
                                         Term::iri(vocab::ontoIri("q")),
                                         Term::iri(std::string(vocab::kRdfType))};
const std::array<Term, 9> kObjects = {
    Term::literal("1", Datatype::Integer),    Term::literal("2", Datatype::Integer),
    Term::literal("2.0", Datatype::Decimal),  Term::literal("a"),
    Term::literal("B"),                       Term::literal("true", Datatype::Boolean),
    Term::literal("2020-01-01", Datatype::Date), Term::iri(vocab::ontoIri("C1")),
    Term::iri(vocab::ontoIri("C2"))};

Term randomObject(Rng& rng) {
  if (chance(rng, 0.3)) return pick(rng, kSubjects);
  return pick(rng, kObjects);
}

// Blank nodes are never written into queries; the subject pool's IRIs stand in.
std::string sparqlTerm(const Term& t) {
  if (t.isBlank()) return "<" + kSubjects[0].value + ">";
  if (t.isIri()) return "<" + t.value + ">";
  switch (t.datatype) {
    case Datatype::Integer:
    case Datatype::Decimal:
    case Datatype::Boolean: return t.value;
    case Datatype::Date: return "\"" + t.value + "\"^^xsd:date";
    default: return "\"" + t.value + "\"";
  }
}

}  // namespace

std::vector<Quad> randomQueryStore(Rng& rng, std::size_t maxQuads) {
  const std::array<Term, 5> graphs = {
      Term::iri(vocab::revisionGraphIri("Main", "S0", 1)),
      Term::iri(vocab::revisionGraphIri("Main", "S1", 3)),
      Term::iri(vocab::revisionGraphIri("Archive", "S3", 1)),
      Term::iri(vocab::inferredGraphIri()), Term::iri("http://elsewhere.example/g")};
  std::vector<Quad> out;
  for (std::size_t n = uniform(rng, 0, maxQuads); n > 0; --n) {
    if (chance(rng, 0.1)) {
      out.push_back({graphs[uniform(rng, 0, 2)], Term::iri(vocab::metaPredicateIri("author")),
                     Term::literal(chance(rng, 0.5) ? "a" : "B"), Term::iri(vocab::metaGraphIri())});
      continue;
    }
    out.push_back({pick(rng, kSubjects), pick(rng, kPredicates), randomObject(rng),
                   pick(rng, graphs)});
  }
  return out;
}

std::string randomQueryText(Rng& rng) {
  const std::array<std::string, 4> vars = {"?a", "?b", "?c", "?d"};
  std::size_t varCount = uniform(rng, 1, 4);
  auto var = [&] { return vars[uniform(rng, 0, varCount - 1)]; };
  auto position = [&](double pVar, const std::string& constant) {
    return chance(rng, pVar) ? var() : constant;
  };

  std::string where;
  std::set<std::string> used;
  std::size_t patterns = uniform(rng, 1, 4);
  for (std::size_t i = 0; i < patterns; ++i) {
    std::string s = position(0.7, sparqlTerm(pick(rng, kSubjects)));
    std::string p;
    if (chance(rng, 0.08)) {
      p = "<" + vocab::metaPredicateIri("author") + ">";
    } else {
      p = position(0.25, sparqlTerm(pick(rng, kPredicates)));
    }
    std::string o = position(0.7, sparqlTerm(randomObject(rng)));
    for (const auto& x : {s, p, o}) {
      if (x[0] == '?') used.insert(x);
    }
    where += "  " + s + " " + p + " " + o + (i + 1 < patterns || chance(rng, 0.5) ? " .\n" : "\n");
  }

  auto operand = [&] {
    if (chance(rng, 0.6) && !used.empty()) return var();
    return sparqlTerm(randomObject(rng));
  };
  auto atom = [&]() -> std::string {
    if (chance(rng, 0.15)) return "regex(" + var() + ", \"^[a-b]\", \"i\")";
    static const std::array<std::string, 6> ops = {"=", "!=", "<", "<=", ">", ">="};
    return operand() + " " + pick(rng, ops) + " " + operand();
  };
  for (std::size_t n = uniform(rng, 0, 2); n > 0; --n) {
    std::string expr;
    switch (uniform(rng, 0, 3)) {
      case 0: expr = atom() + " && " + atom(); break;
      case 1: expr = atom() + " || " + atom(); break;
      case 2: expr = "!(" + atom() + ")"; break;
      default: expr = atom(); break;
    }
    where += "  FILTER(" + expr + ")\n";
  }

  std::string q = "PREFIX ex: <http://wikibridge.example/onto/>\nSELECT ";
  if (chance(rng, 0.3)) q += "DISTINCT ";
  if (chance(rng, 0.3) || used.empty()) {
    q += "*";
  } else {
    std::vector<std::string> pool(used.begin(), used.end());
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(uniform(rng, 1, pool.size()));
    for (const auto& v : pool) q += v + " ";
  }
  q += "\nWHERE {\n" + where + "}\n";
  if (chance(rng, 0.4)) {
    q += "ORDER BY";
    for (std::size_t n = uniform(rng, 1, 2); n > 0; --n) {
      switch (uniform(rng, 0, 2)) {
        case 0: q += " " + var(); break;
        case 1: q += " ASC(" + var() + ")"; break;
        default: q += " DESC(" + var() + ")"; break;
      }
    }
    q += "\n";
  }
  if (chance(rng, 0.3)) q += "LIMIT " + std::to_string(uniform(rng, 0, 8)) + "\n";
  if (chance(rng, 0.2)) q += "OFFSET " + std::to_string(uniform(rng, 0, 4)) + "\n";
  return q;
}

// ____________________________________________________________________________
PageSource generatedWikiPage(std::size_t i) {
  static const std::array<std::string, 4> kinds = {"Church", "Museum", "Chapel", "Building"};
  static const std::array<std::string, 4> styles = {"Gothic", "Romanesque", "Baroque",
                                                    "Renaissance"};
  const std::string n = std::to_string(i);
  PageSource page;
  page.title = "Site " + n;
  page.text = "Generated site number " + n + ".\n";
  page.text += "{{#ann: type=" + kinds[i % 4] + " | label=\"Site " + n +
               "\" | note=\"generated\" | height=" + std::to_string(10 + i % 90) + ".5" +
               " | built=" + std::to_string(1100 + i % 700) + " | listed=" +
               (i % 3 == 0 ? "true" : "false") + " | locatedIn=[[Town " +
               std::to_string(i % 25) + "]] | style=[[" + styles[i % 4] + "]] | architect=[[Architect " +
               std::to_string(i % 40) + "]]}}\n";
  page.text += "Restored in " + std::to_string(1800 + i % 200) + ".\n";
  page.text += "{{#rel: Restoration | building=[[Site " + n + "]] | year=" +
               std::to_string(1800 + i % 200) + " | architect=[[Architect " +
               std::to_string((i + 7) % 40) + "]] | cost=" + std::to_string(1000 + i) + ".25}}\n";
  page.text += "{{#ann: dating={{#rel: Dating | start=" + std::to_string(1100 + i % 700) +
               " | end=" + std::to_string(1150 + i % 700) + " | evidence=[[Chronicle " +
               std::to_string(i % 10) + "]]}}}}\n";
  return page;
}

}  // namespace gen
