#include "syntax.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

#include "wikibridge/text.hpp"
#include "wikibridge/vocabulary.hpp"

namespace wikibridge::detail {

namespace {

bool identHead(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}
bool identChar(char c) { return identHead(c) || (c >= '0' && c <= '9'); }
bool localChar(char c) {
  return identChar(c) || c == '-' || c == '.' || c == '/' || c == '%';
}
bool isDigit(char c) { return c >= '0' && c <= '9'; }

bool equalsIgnoreCase(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = src.size();
  auto push = [&](Tok kind, std::string text, std::size_t at) {
    out.push_back({kind, std::move(text), at});
  };
  while (i < n) {
    char c = src[i];
    if (isSpace(c)) {
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < n && src[i] != '\n') ++i;
      continue;
    }
    std::size_t start = i;
    if (c == '?' || c == '$') {
      ++i;
      while (i < n && identChar(src[i])) ++i;
      if (i == start + 1) throw SyntaxError{start, "empty variable name"};
      push(Tok::Var, std::string(src.substr(start + 1, i - start - 1)), start);
      continue;
    }
    if (c == '<') {
      // An IRI reference runs to '>' without whitespace; otherwise '<' is an operator.
      std::size_t j = i + 1;
      while (j < n && src[j] != '>' && !isSpace(src[j]) && src[j] != '<' && src[j] != '"') ++j;
      if (j < n && src[j] == '>' && j > i + 1 && src[i + 1] != '=') {
        push(Tok::IriRef, std::string(src.substr(i + 1, j - i - 1)), start);
        i = j + 1;
        continue;
      }
      if (i + 1 < n && src[i + 1] == '=') {
        push(Tok::Le, "<=", start);
        i += 2;
      } else {
        push(Tok::Lt, "<", start);
        ++i;
      }
      continue;
    }
    if (c == '"' || c == '\'') {
      char q = c;
      std::string text;
      ++i;
      bool closed = false;
      while (i < n) {
        char d = src[i];
        if (d == q) {
          closed = true;
          ++i;
          break;
        }
        if (d == '\\' && i + 1 < n) {
          char e = src[i + 1];
          switch (e) {
            case 'n': text.push_back('\n'); break;
            case 't': text.push_back('\t'); break;
            case 'r': text.push_back('\r'); break;
            case '"': text.push_back('"'); break;
            case '\'': text.push_back('\''); break;
            case '\\': text.push_back('\\'); break;
            default: throw SyntaxError{i, "unknown escape sequence"};
          }
          i += 2;
          continue;
        }
        text.push_back(d);
        ++i;
      }
      if (!closed) throw SyntaxError{start, "unterminated string"};
      push(Tok::String, std::move(text), start);
      continue;
    }
    bool signedNumber = (c == '+' || c == '-') && i + 1 < n && isDigit(src[i + 1]);
    if (isDigit(c) || signedNumber) {
      ++i;
      while (i < n && isDigit(src[i])) ++i;
      if (i + 1 < n && src[i] == '.' && isDigit(src[i + 1])) {
        ++i;
        while (i < n && isDigit(src[i])) ++i;
      }
      push(Tok::Number, std::string(src.substr(start, i - start)), start);
      continue;
    }
    if (identHead(c) || c == ':') {
      while (i < n && (identChar(src[i]) || src[i] == '-')) ++i;
      if (i < n && src[i] == ':') {
        ++i;
        std::size_t localStart = i;
        while (i < n && localChar(src[i])) ++i;
        while (i > localStart && src[i - 1] == '.') --i;  // statement terminator
        push(Tok::PName, std::string(src.substr(start, i - start)), start);
      } else {
        push(Tok::Word, std::string(src.substr(start, i - start)), start);
      }
      continue;
    }
    auto two = src.substr(i, 2);
    if (two == "&&") { push(Tok::AndAnd, "&&", start); i += 2; continue; }
    if (two == "||") { push(Tok::OrOr, "||", start); i += 2; continue; }
    if (two == "!=") { push(Tok::Ne, "!=", start); i += 2; continue; }
    if (two == ">=") { push(Tok::Ge, ">=", start); i += 2; continue; }
    if (two == "^^") { push(Tok::Carets, "^^", start); i += 2; continue; }
    switch (c) {
      case '{': push(Tok::LBrace, "{", start); break;
      case '}': push(Tok::RBrace, "}", start); break;
      case '(': push(Tok::LParen, "(", start); break;
      case ')': push(Tok::RParen, ")", start); break;
      case '.': push(Tok::Dot, ".", start); break;
      case ',': push(Tok::Comma, ",", start); break;
      case '*': push(Tok::Star, "*", start); break;
      case '!': push(Tok::Bang, "!", start); break;
      case '=': push(Tok::Eq, "=", start); break;
      case '>': push(Tok::Gt, ">", start); break;
      default:
        throw SyntaxError{start, std::string("unexpected character '") + c + "'"};
    }
    ++i;
  }
  out.push_back({Tok::End, "", n});
  return out;
}

// ____________________________________________________________________________
bool TokenCursor::acceptWord(std::string_view word) {
  if (peek().kind == Tok::Word && equalsIgnoreCase(peek().text, word)) {
    next();
    return true;
  }
  return false;
}

const Token& TokenCursor::expect(Tok kind, const char* what) {
  if (peek().kind != kind) fail(std::string("expected ") + what);
  return next();
}

void TokenCursor::fail(const std::string& message) const {
  throw SyntaxError{peek().offset, message};
}

// ____________________________________________________________________________
std::string TermReader::expandPName(const Token& token) const {
  auto colon = token.text.find(':');
  std::string prefix = token.text.substr(0, colon);
  auto it = prefixes.find(prefix);
  if (it == prefixes.end()) {
    throw SyntaxError{token.offset, "unknown prefix '" + prefix + ":'", true};
  }
  return it->second + token.text.substr(colon + 1);
}

Term TermReader::readTerm(TokenCursor& cursor) const {
  const Token& t = cursor.peek();
  switch (t.kind) {
    case Tok::IriRef: {
      cursor.next();
      if (!isAbsoluteIri(t.text)) throw SyntaxError{t.offset, "not an absolute IRI"};
      return Term::iri(t.text);
    }
    case Tok::PName: {
      cursor.next();
      std::string iri = expandPName(t);
      if (!isAbsoluteIri(iri)) throw SyntaxError{t.offset, "not an absolute IRI"};
      return Term::iri(std::move(iri));
    }
    case Tok::Number: {
      cursor.next();
      Datatype dt = isIntegerLexical(t.text) ? Datatype::Integer : Datatype::Decimal;
      return Term::literal(t.text, dt);
    }
    case Tok::String: {
      cursor.next();
      Term lit = Term::literal(t.text, Datatype::String);
      if (cursor.accept(Tok::Carets)) {
        const Token& dtTok = cursor.peek();
        std::string iri;
        if (dtTok.kind == Tok::IriRef) {
          iri = dtTok.text;
        } else if (dtTok.kind == Tok::PName) {
          iri = expandPName(dtTok);
        } else if (dtTok.kind == Tok::Word && datatypeFromName(dtTok.text)) {
          iri = std::string(datatypeIri(*datatypeFromName(dtTok.text)));
        } else {
          cursor.fail("expected datatype after '^^'");
        }
        cursor.next();
        auto dt = datatypeFromIri(iri);
        if (!dt) throw SyntaxError{dtTok.offset, "unsupported datatype " + iri};
        lit.datatype = *dt;
      }
      if (!isValidLexical(lit.datatype, lit.value)) {
        throw SyntaxError{t.offset, "invalid lexical form for datatype"};
      }
      return lit;
    }
    case Tok::Word: {
      if (t.text == "true" || t.text == "false") {
        cursor.next();
        return Term::literal(t.text, Datatype::Boolean);
      }
      if (t.text == "a") {
        cursor.next();
        return Term::iri(std::string(vocab::kRdfType));
      }
      if (resolveWord) {
        if (auto term = resolveWord(t.text)) {
          cursor.next();
          return *term;
        }
      }
      cursor.fail("unexpected word '" + t.text + "'");
    }
    default: cursor.fail("expected a term");
  }
}

Operand TermReader::readOperand(TokenCursor& cursor) const {
  if (cursor.peek().kind == Tok::Var) return Variable{cursor.next().text};
  return readTerm(cursor);
}

FilterExpr TermReader::readFilter(TokenCursor& cursor) const { return readOr(cursor); }

FilterExpr TermReader::readOr(TokenCursor& cursor) const {
  FilterExpr e = readAnd(cursor);
  while (cursor.accept(Tok::OrOr)) e = FilterExpr::either(std::move(e), readAnd(cursor));
  return e;
}

FilterExpr TermReader::readAnd(TokenCursor& cursor) const {
  FilterExpr e = readUnary(cursor);
  while (cursor.accept(Tok::AndAnd)) e = FilterExpr::both(std::move(e), readUnary(cursor));
  return e;
}

FilterExpr TermReader::readUnary(TokenCursor& cursor) const {
  if (cursor.accept(Tok::Bang)) return FilterExpr::negate(readUnary(cursor));
  return readPrimary(cursor);
}

FilterExpr TermReader::readPrimary(TokenCursor& cursor) const {
  if (cursor.accept(Tok::LParen)) {
    FilterExpr e = readOr(cursor);
    cursor.expect(Tok::RParen, "')'");
    return e;
  }
  if (cursor.peek().kind == Tok::Word && cursor.peek(1).kind == Tok::LParen &&
      cursor.acceptWord("regex")) {
    cursor.next();  // '('
    const Token& var = cursor.expect(Tok::Var, "a variable as first regex() argument");
    Variable target{var.text};
    cursor.expect(Tok::Comma, "','");
    const Token& pattern = cursor.expect(Tok::String, "a pattern string");
    std::string flags;
    if (cursor.accept(Tok::Comma)) {
      const Token& f = cursor.expect(Tok::String, "a flags string");
      if (f.text != "" && f.text != "i") throw SyntaxError{f.offset, "unsupported regex flags"};
      flags = f.text;
    }
    cursor.expect(Tok::RParen, "')'");
    try {
      return FilterExpr::regex(std::move(target), pattern.text, flags);
    } catch (const std::regex_error&) {
      throw SyntaxError{pattern.offset, "invalid regular expression"};
    }
  }
  Operand lhs = readOperand(cursor);
  CompareOp op;
  switch (cursor.peek().kind) {
    case Tok::Eq: op = CompareOp::Eq; break;
    case Tok::Ne: op = CompareOp::Ne; break;
    case Tok::Lt: op = CompareOp::Lt; break;
    case Tok::Le: op = CompareOp::Le; break;
    case Tok::Gt: op = CompareOp::Gt; break;
    case Tok::Ge: op = CompareOp::Ge; break;
    default: cursor.fail("expected a comparison operator");
  }
  cursor.next();
  Operand rhs = readOperand(cursor);
  return FilterExpr::compare(op, std::move(lhs), std::move(rhs));
}

}  // namespace wikibridge::detail
