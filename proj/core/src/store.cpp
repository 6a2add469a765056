#include "wikibridge/store.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

#include "wikibridge/text.hpp"

namespace wikibridge {

bool isValidQuad(const Quad& q) {
  return (q.s.isIri() || q.s.isBlank()) && q.p.isIri() && q.g.isIri() && isValidTerm(q.s) &&
         isValidTerm(q.p) && isValidTerm(q.o) && isValidTerm(q.g);
}

bool QuadPattern::matches(const Quad& q) const {
  return (!s || *s == q.s) && (!p || *p == q.p) && (!o || *o == q.o) && (!g || *g == q.g);
}

std::string toNQuadsLine(const Quad& q) {
  return toNTriples(q.s) + " " + toNTriples(q.p) + " " + toNTriples(q.o) + " " +
         toNTriples(q.g) + " .";
}

// ____________________________________________________________________________
namespace {

void appendUtf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

class LineParser {
 public:
  explicit LineParser(std::string_view line) : line_(line) {}

  // Returns nullopt for blank/comment lines; throws std::runtime_error on bad syntax.
  std::optional<Quad> parse() {
    skipSpace();
    if (atEnd() || peek() == '#') return std::nullopt;
    Quad q;
    q.s = parseTerm("subject");
    if (q.s.isLiteral()) fail("subject must be an IRI or blank node");
    q.p = parseTerm("predicate");
    if (!q.p.isIri()) fail("predicate must be an IRI");
    q.o = parseTerm("object");
    q.g = parseTerm("graph");
    if (!q.g.isIri()) fail("graph name must be an IRI");
    skipSpace();
    if (atEnd() || peek() != '.') fail("expected '.' at end of statement");
    ++pos_;
    skipSpace();
    if (!atEnd() && peek() != '#') fail("trailing characters after '.'");
    if (!isValidQuad(q)) fail("invalid term");
    return q;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }
  bool atEnd() const { return pos_ >= line_.size(); }
  char peek() const { return line_[pos_]; }
  void skipSpace() {
    while (!atEnd() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) ++pos_;
  }

  Term parseTerm(const char* what) {
    skipSpace();
    if (atEnd()) fail(std::string("missing ") + what);
    char c = peek();
    if (c == '<') return Term::iri(parseIri());
    if (c == '_') {
      if (pos_ + 1 >= line_.size() || line_[pos_ + 1] != ':') fail("bad blank node");
      pos_ += 2;
      std::size_t start = pos_;
      while (!atEnd() && peek() != ' ' && peek() != '\t') ++pos_;
      std::string label(line_.substr(start, pos_ - start));
      // A statement-ending '.' may be glued to the label.
      if (!label.empty() && label.back() == '.') {
        label.pop_back();
        --pos_;
      }
      if (!isValidBlankLabel(label)) fail("bad blank node label");
      return Term::blank(std::move(label));
    }
    if (c == '"') return parseLiteral();
    fail(std::string("unexpected character in ") + what);
  }

  std::string parseIri() {
    ++pos_;  // '<'
    std::size_t close = line_.find('>', pos_);
    if (close == std::string_view::npos) fail("unterminated IRI");
    std::string iri(line_.substr(pos_, close - pos_));
    pos_ = close + 1;
    if (!isAbsoluteIri(iri)) fail("not an absolute IRI: " + iri);
    return iri;
  }

  Term parseLiteral() {
    ++pos_;  // opening quote
    std::string lexical;
    while (true) {
      if (atEnd()) fail("unterminated literal");
      char c = line_[pos_++];
      if (c == '"') break;
      if (c != '\\') {
        lexical.push_back(c);
        continue;
      }
      if (atEnd()) fail("dangling escape");
      char e = line_[pos_++];
      switch (e) {
        case 't': lexical.push_back('\t'); break;
        case 'b': lexical.push_back('\b'); break;
        case 'n': lexical.push_back('\n'); break;
        case 'r': lexical.push_back('\r'); break;
        case 'f': lexical.push_back('\f'); break;
        case '"': lexical.push_back('"'); break;
        case '\'': lexical.push_back('\''); break;
        case '\\': lexical.push_back('\\'); break;
        case 'u':
        case 'U': {
          std::size_t n = e == 'u' ? 4 : 8;
          if (pos_ + n > line_.size()) fail("short unicode escape");
          std::uint32_t cp = 0;
          for (std::size_t i = 0; i < n; ++i) {
            char h = line_[pos_ + i];
            cp <<= 4;
            if (h >= '0' && h <= '9') cp |= h - '0';
            else if (h >= 'A' && h <= 'F') cp |= h - 'A' + 10;
            else if (h >= 'a' && h <= 'f') cp |= h - 'a' + 10;
            else fail("bad unicode escape");
          }
          if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) fail("bad code point");
          pos_ += n;
          appendUtf8(lexical, cp);
          break;
        }
        default: fail("unknown escape");
      }
    }
    Datatype dt = Datatype::String;
    if (!atEnd() && peek() == '@') fail("language-tagged literals are not supported");
    if (pos_ + 1 < line_.size() && peek() == '^' && line_[pos_ + 1] == '^') {
      pos_ += 2;
      if (atEnd() || peek() != '<') fail("expected datatype IRI");
      std::string iri = parseIri();
      auto parsed = datatypeFromIri(iri);
      if (!parsed) fail("unsupported datatype " + iri);
      dt = *parsed;
    }
    if (!isValidLexical(dt, lexical)) fail("invalid lexical form for datatype");
    return Term::literal(std::move(lexical), dt);
  }

  std::string_view line_;
  std::size_t pos_ = 0;
};

}  // namespace

NQuadsParseResult parseNQuads(std::string_view text) {
  NQuadsParseResult result;
  std::size_t lineNo = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    ++lineNo;
    try {
      if (auto q = LineParser(text.substr(pos, eol - pos)).parse()) {
        result.quads.push_back(std::move(*q));
      }
    } catch (const std::runtime_error& e) {
      result.quads.clear();
      result.error = NQuadsError{lineNo, e.what()};
      return result;
    }
    pos = eol + 1;
  }
  return result;
}

// ____________________________________________________________________________
QuadStore::Id QuadStore::intern(const Term& t) {
  if (auto it = ids_.find(t); it != ids_.end()) return it->second;
  Id id = static_cast<Id>(terms_.size());
  terms_.push_back(t);
  ids_.emplace(t, id);
  return id;
}

std::optional<QuadStore::Id> QuadStore::idOf(const Term& t) const {
  if (auto it = ids_.find(t); it != ids_.end()) return it->second;
  return std::nullopt;
}

std::optional<QuadStore::IdQuad> QuadStore::lookup(const Quad& q) const {
  auto s = idOf(q.s);
  auto p = idOf(q.p);
  auto o = idOf(q.o);
  auto g = idOf(q.g);
  if (!s || !p || !o || !g) return std::nullopt;
  return IdQuad{*s, *p, *o, *g};
}

void QuadStore::insertIds(const IdQuad& q) {
  spog_.insert({q.s, q.p, q.o, q.g});
  posg_.insert({q.p, q.o, q.s, q.g});
  ospg_.insert({q.o, q.s, q.p, q.g});
  gspo_.insert({q.g, q.s, q.p, q.o});
}

void QuadStore::eraseIds(const IdQuad& q) {
  spog_.erase({q.s, q.p, q.o, q.g});
  posg_.erase({q.p, q.o, q.s, q.g});
  ospg_.erase({q.o, q.s, q.p, q.g});
  gspo_.erase({q.g, q.s, q.p, q.o});
}

Quad QuadStore::decode(const IdQuad& q) const {
  return {terms_[q.s], terms_[q.p], terms_[q.o], terms_[q.g]};
}

bool QuadStore::insert(const Quad& q) {
  if (!isValidQuad(q)) throw std::invalid_argument("invalid quad: " + toNQuadsLine(q));
  IdQuad ids{intern(q.s), intern(q.p), intern(q.o), intern(q.g)};
  if (spog_.contains({ids.s, ids.p, ids.o, ids.g})) return false;
  insertIds(ids);
  return true;
}

bool QuadStore::remove(const Quad& q) {
  auto ids = lookup(q);
  if (!ids || !spog_.contains({ids->s, ids->p, ids->o, ids->g})) return false;
  eraseIds(*ids);
  return true;
}

bool QuadStore::contains(const Quad& q) const {
  auto ids = lookup(q);
  return ids && spog_.contains({ids->s, ids->p, ids->o, ids->g});
}

std::size_t QuadStore::dropGraph(const Term& graph) {
  auto g = idOf(graph);
  if (!g) return 0;
  std::vector<IdQuad> doomed;
  scan(gspo_, Key{*g, 0, 0, 0}, 1,
       [&](const Key& k) { doomed.push_back({k[1], k[2], k[3], k[0]}); });
  for (const auto& q : doomed) eraseIds(q);
  return doomed.size();
}

void QuadStore::clear() {
  spog_.clear();
  posg_.clear();
  ospg_.clear();
  gspo_.clear();
  terms_.clear();
  ids_.clear();
}

std::vector<Quad> QuadStore::match(const QuadPattern& pattern) const {
  std::vector<Quad> out;
  auto resolve = [&](const std::optional<Term>& t, std::optional<Id>& id) {
    if (!t) return true;
    id = idOf(*t);
    return id.has_value();
  };
  std::optional<Id> s, p, o, g;
  if (!resolve(pattern.s, s) || !resolve(pattern.p, p) || !resolve(pattern.o, o) ||
      !resolve(pattern.g, g)) {
    return out;
  }
  forEachMatch(s, p, o, g, [&](const IdQuad& q) { out.push_back(decode(q)); });
  return out;
}

std::vector<Term> QuadStore::graphs() const {
  std::vector<Term> out;
  std::optional<Id> last;
  for (const Key& k : gspo_) {
    if (last == k[0]) continue;
    last = k[0];
    out.push_back(terms_[k[0]]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string QuadStore::exportNQuads() const {
  using Row = std::array<std::string, 4>;  // g, s, p, o surface forms
  std::vector<Row> rows;
  rows.reserve(size());
  for (const Key& k : spog_) {
    rows.push_back({toNTriples(terms_[k[3]]), toNTriples(terms_[k[0]]),
                    toNTriples(terms_[k[1]]), toNTriples(terms_[k[2]])});
  }
  std::sort(rows.begin(), rows.end());
  std::string out;
  for (const Row& r : rows) {
    out += r[1];
    out += ' ';
    out += r[2];
    out += ' ';
    out += r[3];
    out += ' ';
    out += r[0];
    out += " .\n";
  }
  return out;
}

std::optional<NQuadsError> QuadStore::importNQuads(std::string_view text) {
  auto parsed = parseNQuads(text);
  if (parsed.error) return parsed.error;
  for (const auto& q : parsed.quads) insert(q);
  return std::nullopt;
}

}  // namespace wikibridge
