#pragma once

// Wikitext with embedded annotation blocks.
//
//   simple:  {{#ann: key=value | key=value ...}}
//   n-ary:   {{#rel: RelName | role=value | role=value ...}}
//
// Values are quoted strings (optionally `^^datatype`), bare numbers, booleans,
// ISO dates, page references `[[Title]]`, nested blocks, or bare tokens (string
// literals). See docs/annotation-syntax.md for the full grammar.

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "wikibridge/datatype.hpp"

namespace wikibridge {

inline constexpr int kMaxNestingDepth = 8;

// Half-open byte range [start, end) into a page's text.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  bool contains(const Span& other) const {
    return start <= other.start && other.end <= end;
  }
  auto operator<=>(const Span&) const = default;
};

struct PageSource {
  std::string title;
  std::string ns = "Main";
  std::string text;
};

// Nonempty, no `/`, no control characters, no surrounding whitespace.
bool isValidTitle(std::string_view title);
bool isIdentifier(std::string_view s);

struct LiteralValue {
  std::string lexical;
  Datatype datatype = Datatype::String;
  bool operator==(const LiteralValue&) const = default;
};

struct PageRef {
  std::string title;
  bool operator==(const PageRef&) const = default;
};

struct AnnotationNode;

// Owning, deep-copying holder for a sub-annotation.
class Nested {
 public:
  explicit Nested(AnnotationNode node);
  Nested(const Nested& other);
  Nested& operator=(const Nested& other);
  Nested(Nested&&) noexcept;
  Nested& operator=(Nested&&) noexcept;
  ~Nested();

  const AnnotationNode& node() const { return *node_; }
  AnnotationNode& node() { return *node_; }

 private:
  std::unique_ptr<AnnotationNode> node_;
};

using Value = std::variant<LiteralValue, PageRef, Nested>;

struct Pair {
  std::string key;
  Value value;
  Span span;  // from the first byte of the key to the last byte of the value
};

enum class AnnotationKind { Simple, NAry };

struct AnnotationNode {
  AnnotationKind kind = AnnotationKind::Simple;
  std::string relation;  // set iff kind == NAry
  std::vector<Pair> pairs;
  Span span;
};

// Compares kind, relation, keys and values recursively; spans are ignored.
bool sameStructure(const AnnotationNode& a, const AnnotationNode& b);
bool sameStructure(const Value& a, const Value& b);

struct PlainSegment {
  Span span;
  std::string text;
};

struct ParsedPage {
  PageSource source;
  std::vector<AnnotationNode> annotations;  // top-level, document order
  std::vector<PlainSegment> plainSegments;
};

bool sameStructure(const ParsedPage& a, const ParsedPage& b);

enum class ParseErrorKind {
  UnterminatedBlock,
  MissingKey,
  BadDatatypeLexical,
  UnknownDirective,
  NestingTooDeep,
  UnexpectedToken,
  InvalidEncoding,
};

std::string_view parseErrorKindName(ParseErrorKind kind);

struct ParseDiagnostic {
  ParseErrorKind kind;
  Span span;
  std::string message;
};

// `page` is set iff `diagnostics` is empty.
struct ParseResult {
  std::optional<ParsedPage> page;
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return page.has_value(); }
};

ParseResult parsePage(const PageSource& source);

// Canonical form of one block.
std::string serializeAnnotation(const AnnotationNode& node);
PageSource serializePage(const ParsedPage& parsed);

// Free text with every annotation block removed; whitespace around each removed
// run collapses to a single space.
std::string stripAnnotations(const ParsedPage& parsed);

// True if the text contains an annotation directive opener `{{#`.
bool containsAnnotationBlock(std::string_view text);

// Counts every node in the tree rooted at `node`, including itself.
std::size_t countNodes(const AnnotationNode& node);

}  // namespace wikibridge
