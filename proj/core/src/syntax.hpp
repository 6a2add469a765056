#pragma once

// Tokenizer and term/expression readers shared by the SPARQL parser and the
// rule section of the ontology DSL.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wikibridge/expr.hpp"
#include "wikibridge/term.hpp"

namespace wikibridge::detail {

enum class Tok {
  End,
  Var,
  IriRef,
  PName,
  String,
  Number,
  Word,
  LBrace,
  RBrace,
  LParen,
  RParen,
  Dot,
  Comma,
  Star,
  Bang,
  AndAnd,
  OrOr,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  Carets,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;  // variable name, IRI, raw pname, decoded string, number, word
  std::size_t offset = 0;
};

struct SyntaxError {
  std::size_t offset = 0;
  std::string message;
  bool unknownPrefix = false;
};

// Throws SyntaxError.
std::vector<Token> tokenize(std::string_view src);

class TokenCursor {
 public:
  explicit TokenCursor(const std::vector<Token>& tokens) : tokens_(tokens) {}

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }
  bool accept(Tok kind) {
    if (peek().kind != kind) return false;
    next();
    return true;
  }
  bool acceptWord(std::string_view word);  // case-insensitive
  const Token& expect(Tok kind, const char* what);
  [[noreturn]] void fail(const std::string& message) const;

 private:
  const std::vector<Token>& tokens_;
  std::size_t pos_ = 0;
};

// Resolves prefixed names and bare words into terms.
struct TermReader {
  std::map<std::string, std::string> prefixes;
  // Bare words other than true/false/a; nullopt rejects the word.
  std::function<std::optional<Term>(const std::string&)> resolveWord;

  std::string expandPName(const Token& token) const;
  // Reads one term; variables are rejected.
  Term readTerm(TokenCursor& cursor) const;
  Operand readOperand(TokenCursor& cursor) const;
  FilterExpr readFilter(TokenCursor& cursor) const;

 private:
  FilterExpr readOr(TokenCursor& cursor) const;
  FilterExpr readAnd(TokenCursor& cursor) const;
  FilterExpr readUnary(TokenCursor& cursor) const;
  FilterExpr readPrimary(TokenCursor& cursor) const;
};

}  // namespace wikibridge::detail
