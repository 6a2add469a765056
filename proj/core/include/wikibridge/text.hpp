#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace wikibridge {

// Offset of the first byte that breaks UTF-8 well-formedness (overlongs,
// surrogates and code points above U+10FFFF included), or nullopt.
std::optional<std::size_t> firstInvalidUtf8(std::string_view s);

// RFC 3986 percent-encoding; everything outside A-Z a-z 0-9 - . _ ~ is escaped.
std::string percentEncode(std::string_view s);
std::optional<std::string> percentDecode(std::string_view s);

std::string_view trim(std::string_view s);
inline bool isSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string toHex(std::string_view bytes);

}  // namespace wikibridge
