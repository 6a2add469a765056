#include "wikibridge/markup.hpp"

#include <utility>

#include "wikibridge/text.hpp"

namespace wikibridge {

// ____________________________________________________________________________
Nested::Nested(AnnotationNode node)
    : node_(std::make_unique<AnnotationNode>(std::move(node))) {}
Nested::Nested(const Nested& other)
    : node_(std::make_unique<AnnotationNode>(*other.node_)) {}
Nested& Nested::operator=(const Nested& other) {
  if (this != &other) node_ = std::make_unique<AnnotationNode>(*other.node_);
  return *this;
}
Nested::Nested(Nested&&) noexcept = default;
Nested& Nested::operator=(Nested&&) noexcept = default;
Nested::~Nested() = default;

// ____________________________________________________________________________
bool isIdentifier(std::string_view s) {
  if (s.empty()) return false;
  auto head = [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
  };
  if (!head(s[0])) return false;
  for (char c : s.substr(1)) {
    if (!head(c) && !(c >= '0' && c <= '9')) return false;
  }
  return true;
}

bool isValidTitle(std::string_view title) {
  if (title.empty() || trim(title).size() != title.size()) return false;
  for (char ch : title) {
    auto c = static_cast<unsigned char>(ch);
    if (c < 0x20 || c == 0x7F || ch == '/') return false;
  }
  return !firstInvalidUtf8(title).has_value();
}

bool containsAnnotationBlock(std::string_view text) {
  return text.find("{{#") != std::string_view::npos;
}

std::string_view parseErrorKindName(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::UnterminatedBlock: return "UnterminatedBlock";
    case ParseErrorKind::MissingKey: return "MissingKey";
    case ParseErrorKind::BadDatatypeLexical: return "BadDatatypeLexical";
    case ParseErrorKind::UnknownDirective: return "UnknownDirective";
    case ParseErrorKind::NestingTooDeep: return "NestingTooDeep";
    case ParseErrorKind::UnexpectedToken: return "UnexpectedToken";
    case ParseErrorKind::InvalidEncoding: return "InvalidEncoding";
  }
  return "UnexpectedToken";
}

// ____________________________________________________________________________
bool sameStructure(const Value& a, const Value& b) {
  if (a.index() != b.index()) return false;
  if (auto* la = std::get_if<LiteralValue>(&a)) return *la == std::get<LiteralValue>(b);
  if (auto* pa = std::get_if<PageRef>(&a)) return *pa == std::get<PageRef>(b);
  return sameStructure(std::get<Nested>(a).node(), std::get<Nested>(b).node());
}

bool sameStructure(const AnnotationNode& a, const AnnotationNode& b) {
  if (a.kind != b.kind || a.relation != b.relation || a.pairs.size() != b.pairs.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.pairs.size(); ++i) {
    if (a.pairs[i].key != b.pairs[i].key) return false;
    if (!sameStructure(a.pairs[i].value, b.pairs[i].value)) return false;
  }
  return true;
}

bool sameStructure(const ParsedPage& a, const ParsedPage& b) {
  if (a.annotations.size() != b.annotations.size()) return false;
  for (std::size_t i = 0; i < a.annotations.size(); ++i) {
    if (!sameStructure(a.annotations[i], b.annotations[i])) return false;
  }
  return stripAnnotations(a) == stripAnnotations(b);
}

std::size_t countNodes(const AnnotationNode& node) {
  std::size_t n = 1;
  for (const auto& pair : node.pairs) {
    if (auto* nested = std::get_if<Nested>(&pair.value)) n += countNodes(nested->node());
  }
  return n;
}

// ____________________________________________________________________________
namespace {

// Aborts the block being parsed; the caller resynchronises at the next `}}`.
struct BlockError {
  ParseErrorKind kind;
  Span span;
  std::string message;
};

// Classifies a bare (unquoted) token.
Datatype classifyBare(std::string_view token) {
  if (isIntegerLexical(token)) return Datatype::Integer;
  if (isDecimalLexical(token)) return Datatype::Decimal;
  if (token == "true" || token == "false") return Datatype::Boolean;
  if (isDateLexical(token)) return Datatype::Date;
  return Datatype::String;
}

bool isBareStop(char c) {
  return c == '|' || c == '{' || c == '}' || c == '"' || c == '[' || c == ']' ||
         c == '=';
}

class BlockParser {
 public:
  explicit BlockParser(std::string_view text) : text_(text) {}

  AnnotationNode parseBlock(std::size_t at, int depth) {
    if (depth > kMaxNestingDepth) {
      throw BlockError{ParseErrorKind::NestingTooDeep, {at, at + 3},
                       "annotation nesting deeper than " +
                           std::to_string(kMaxNestingDepth)};
    }
    blockStart_ = depth == 1 ? at : blockStart_;
    std::size_t pos = at + 3;  // past "{{#"
    std::size_t nameStart = pos;
    while (pos < text_.size() && text_[pos] != ':' && text_[pos] != '}' &&
           !isSpace(text_[pos]) && pos - nameStart < 64) {
      ++pos;
    }
    std::string_view directive = text_.substr(nameStart, pos - nameStart);
    if (pos >= text_.size() || text_[pos] != ':' ||
        (directive != "ann" && directive != "rel")) {
      throw BlockError{ParseErrorKind::UnknownDirective, {at, pos},
                       "unknown directive '{{#" + std::string(directive) + "'"};
    }
    ++pos;  // ':'

    AnnotationNode node;
    node.kind = directive == "rel" ? AnnotationKind::NAry : AnnotationKind::Simple;
    if (node.kind == AnnotationKind::NAry) {
      pos = skipSpace(pos);
      std::size_t relStart = pos;
      while (pos < text_.size() && (isIdentChar(text_[pos]))) ++pos;
      node.relation = std::string(text_.substr(relStart, pos - relStart));
      if (!isIdentifier(node.relation)) {
        unterminatedIfEof(pos, at);
        throw BlockError{ParseErrorKind::MissingKey, {relStart, pos},
                         "n-ary block needs a relation name"};
      }
      pos = skipSpace(pos);
      unterminatedIfEof(pos, at);
      if (text_[pos] != '|') {
        if (startsWith(pos, "}}")) {
          throw BlockError{ParseErrorKind::MissingKey, {pos, pos + 2},
                           "n-ary block needs at least one role=value pair"};
        }
        throw BlockError{ParseErrorKind::UnexpectedToken, {pos, pos + 1},
                         "expected '|' after relation name"};
      }
      ++pos;
    }

    while (true) {
      pos = skipSpace(pos);
      unterminatedIfEof(pos, at);
      if (node.pairs.empty() && startsWith(pos, "}}")) {
        throw BlockError{ParseErrorKind::MissingKey, {pos, pos + 2},
                         "annotation block has no key=value pair"};
      }
      node.pairs.push_back(parsePair(pos, at, depth));
      pos = skipSpace(node.pairs.back().span.end);
      unterminatedIfEof(pos, at);
      if (startsWith(pos, "}}")) {
        node.span = {at, pos + 2};
        return node;
      }
      if (text_[pos] != '|') {
        throw BlockError{ParseErrorKind::UnexpectedToken, {pos, pos + 1},
                         "expected '|' or '}}'"};
      }
      ++pos;
    }
  }

 private:
  static bool isIdentChar(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
           c == '_';
  }

  bool startsWith(std::size_t pos, std::string_view s) const {
    return text_.substr(pos).starts_with(s);
  }

  std::size_t skipSpace(std::size_t pos) const {
    while (pos < text_.size() && isSpace(text_[pos])) ++pos;
    return pos;
  }

  void unterminatedIfEof(std::size_t pos, std::size_t at) const {
    (void)at;
    if (pos >= text_.size()) {
      throw BlockError{ParseErrorKind::UnterminatedBlock, {blockStart_, text_.size()},
                       "annotation block is not closed with '}}'"};
    }
  }

  Pair parsePair(std::size_t pos, std::size_t at, int depth) {
    std::size_t keyStart = pos;
    while (pos < text_.size() && isIdentChar(text_[pos])) ++pos;
    std::string_view key = text_.substr(keyStart, pos - keyStart);
    if (!isIdentifier(key)) {
      unterminatedIfEof(pos, at);
      throw BlockError{ParseErrorKind::MissingKey, {keyStart, std::max(pos, keyStart + 1)},
                       "expected a key of the form [A-Za-z_][A-Za-z0-9_]*"};
    }
    pos = skipSpace(pos);
    unterminatedIfEof(pos, at);
    if (text_[pos] != '=') {
      throw BlockError{ParseErrorKind::UnexpectedToken, {pos, pos + 1},
                       "expected '=' after key '" + std::string(key) + "'"};
    }
    pos = skipSpace(pos + 1);
    unterminatedIfEof(pos, at);
    Pair pair{std::string(key), LiteralValue{}, {keyStart, keyStart}};
    pair.span.end = parseValue(pos, at, depth, pair.value);
    return pair;
  }

  // Returns the offset one past the value.
  std::size_t parseValue(std::size_t pos, std::size_t at, int depth, Value& out) {
    if (startsWith(pos, "{{#")) {
      AnnotationNode inner = parseBlock(pos, depth + 1);
      std::size_t end = inner.span.end;
      out = Nested(std::move(inner));
      return end;
    }
    if (text_[pos] == '"') return parseQuoted(pos, at, out);
    if (startsWith(pos, "[[")) {
      std::size_t close = text_.find("]]", pos + 2);
      if (close == std::string_view::npos) unterminatedIfEof(text_.size(), at);
      std::string_view title = text_.substr(pos + 2, close - pos - 2);
      if (!isValidTitle(title) || title.find_first_of("[]{}|") != std::string_view::npos) {
        throw BlockError{ParseErrorKind::UnexpectedToken, {pos, close + 2},
                         "invalid page reference"};
      }
      out = PageRef{std::string(title)};
      return close + 2;
    }
    std::size_t start = pos;
    while (pos < text_.size() && !isBareStop(text_[pos])) ++pos;
    std::string_view raw = text_.substr(start, pos - start);
    std::string_view token = trim(raw);
    if (token.empty()) {
      unterminatedIfEof(pos, at);
      throw BlockError{ParseErrorKind::UnexpectedToken, {start, pos + 1},
                       "missing value"};
    }
    out = LiteralValue{std::string(token), classifyBare(token)};
    // Trailing whitespace is not part of the value.
    return start + (token.data() - raw.data()) + token.size();
  }

  std::size_t parseQuoted(std::size_t pos, std::size_t at, Value& out) {
    std::size_t start = pos;
    std::string lexical;
    ++pos;
    while (true) {
      if (pos >= text_.size()) unterminatedIfEof(pos, at);
      char c = text_[pos];
      if (c == '"') break;
      if (c == '\\' && pos + 1 < text_.size() &&
          (text_[pos + 1] == '"' || text_[pos + 1] == '\\')) {
        lexical.push_back(text_[pos + 1]);
        pos += 2;
        continue;
      }
      lexical.push_back(c);
      ++pos;
    }
    ++pos;  // closing quote
    Datatype dt = Datatype::String;
    if (startsWith(pos, "^^")) {
      std::size_t nameStart = pos + 2;
      std::size_t p = nameStart;
      while (p < text_.size() && isIdentChar(text_[p])) ++p;
      auto parsed = datatypeFromName(text_.substr(nameStart, p - nameStart));
      if (!parsed) {
        throw BlockError{ParseErrorKind::BadDatatypeLexical, {start, p},
                         "unknown datatype '" +
                             std::string(text_.substr(nameStart, p - nameStart)) + "'"};
      }
      dt = *parsed;
      pos = p;
    }
    if (!isValidLexical(dt, lexical)) {
      throw BlockError{ParseErrorKind::BadDatatypeLexical, {start, pos},
                       "'" + lexical + "' is not a valid " +
                           std::string(datatypeName(dt)) + " lexical form"};
    }
    out = LiteralValue{std::move(lexical), dt};
    return pos;
  }

  std::string_view text_;
  std::size_t blockStart_ = 0;
};

void appendQuoted(std::string& out, std::string_view s) {
  out.push_back('"');
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
}

void appendValue(std::string& out, std::string_view key, const Value& value);

void appendNode(std::string& out, const AnnotationNode& node) {
  if (node.kind == AnnotationKind::NAry) {
    out += "{{#rel: ";
    out += node.relation;
    out += " | ";
  } else {
    out += "{{#ann: ";
  }
  for (std::size_t i = 0; i < node.pairs.size(); ++i) {
    if (i > 0) out += " | ";
    out += node.pairs[i].key;
    out.push_back('=');
    appendValue(out, node.pairs[i].key, node.pairs[i].value);
  }
  out += "}}";
}

void appendValue(std::string& out, std::string_view key, const Value& value) {
  if (auto* lit = std::get_if<LiteralValue>(&value)) {
    if (lit->datatype == Datatype::String) {
      // Class names under the reserved `type` key stay bare.
      bool bareClass = key == "type" && isIdentifier(lit->lexical) &&
                       classifyBare(lit->lexical) == Datatype::String;
      if (bareClass) {
        out += lit->lexical;
      } else {
        appendQuoted(out, lit->lexical);
      }
    } else if (classifyBare(lit->lexical) == lit->datatype) {
      out += lit->lexical;
    } else {
      appendQuoted(out, lit->lexical);
      out += "^^";
      out += datatypeName(lit->datatype);
    }
  } else if (auto* ref = std::get_if<PageRef>(&value)) {
    out += "[[";
    out += ref->title;
    out += "]]";
  } else {
    appendNode(out, std::get<Nested>(value).node());
  }
}

}  // namespace

// ____________________________________________________________________________
ParseResult parsePage(const PageSource& source) {
  ParseResult result;
  std::string_view text = source.text;

  if (auto bad = firstInvalidUtf8(text)) {
    result.diagnostics.push_back({ParseErrorKind::InvalidEncoding, {*bad, *bad + 1},
                                  "text is not valid UTF-8"});
    return result;
  }
  if (auto nul = text.find('\0'); nul != std::string_view::npos) {
    result.diagnostics.push_back(
        {ParseErrorKind::InvalidEncoding, {nul, nul + 1}, "text contains a NUL byte"});
    return result;
  }

  ParsedPage page;
  page.source = source;
  BlockParser parser(text);
  std::size_t pos = 0;
  std::size_t plainStart = 0;
  while (pos < text.size()) {
    std::size_t at = text.find("{{#", pos);
    if (at == std::string_view::npos) break;
    try {
      AnnotationNode node = parser.parseBlock(at, 1);
      if (at > plainStart) {
        page.plainSegments.push_back(
            {{plainStart, at}, std::string(text.substr(plainStart, at - plainStart))});
      }
      pos = plainStart = node.span.end;
      page.annotations.push_back(std::move(node));
    } catch (const BlockError& error) {
      result.diagnostics.push_back({error.kind, error.span, error.message});
      std::size_t resume = text.find("}}", std::max(error.span.start, at + 3));
      pos = resume == std::string_view::npos ? text.size() : resume + 2;
      plainStart = pos;
    }
  }
  if (plainStart < text.size()) {
    page.plainSegments.push_back(
        {{plainStart, text.size()}, std::string(text.substr(plainStart))});
  }
  if (result.diagnostics.empty()) result.page = std::move(page);
  return result;
}

std::string serializeAnnotation(const AnnotationNode& node) {
  std::string out;
  appendNode(out, node);
  return out;
}

PageSource serializePage(const ParsedPage& parsed) {
  PageSource out{parsed.source.title, parsed.source.ns, {}};
  std::size_t nextPlain = 0;
  std::size_t nextAnn = 0;
  // Merge by span start; both lists are in document order.
  while (nextPlain < parsed.plainSegments.size() || nextAnn < parsed.annotations.size()) {
    bool takePlain =
        nextAnn >= parsed.annotations.size() ||
        (nextPlain < parsed.plainSegments.size() &&
         parsed.plainSegments[nextPlain].span.start <= parsed.annotations[nextAnn].span.start);
    if (takePlain) {
      out.text += parsed.plainSegments[nextPlain++].text;
    } else {
      appendNode(out.text, parsed.annotations[nextAnn++]);
    }
  }
  return out;
}

std::string stripAnnotations(const ParsedPage& parsed) {
  if (parsed.annotations.empty()) {
    std::string all;
    for (const auto& seg : parsed.plainSegments) all += seg.text;
    return all;
  }
  std::string out;
  bool gap = false;  // an annotation run sits between `out` and the next segment
  std::size_t nextAnn = 0;
  for (const auto& seg : parsed.plainSegments) {
    while (nextAnn < parsed.annotations.size() &&
           parsed.annotations[nextAnn].span.start < seg.span.start) {
      gap = true;
      ++nextAnn;
    }
    std::string_view piece = seg.text;
    if (gap) {
      while (!out.empty() && isSpace(out.back())) out.pop_back();
      while (!piece.empty() && isSpace(piece.front())) piece.remove_prefix(1);
      if (!out.empty() && !piece.empty()) out.push_back(' ');
      gap = false;
    }
    out += piece;
  }
  if (nextAnn < parsed.annotations.size()) {
    while (!out.empty() && isSpace(out.back())) out.pop_back();
  }
  return out;
}

}  // namespace wikibridge
