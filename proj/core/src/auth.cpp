#include "wikibridge/auth.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/rand.h>

#include <sstream>
#include <stdexcept>
#include <vector>

#include "wikibridge/text.hpp"

namespace wikibridge {
namespace {

constexpr std::size_t kHashBytes = 32;

std::optional<std::string> fromHex(std::string_view hex) {
  if (hex.size() % 2 != 0) return std::nullopt;
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  std::string out;
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    int hi = nibble(hex[i]);
    int lo = nibble(hex[i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out.push_back(static_cast<char>(hi * 16 + lo));
  }
  return out;
}

std::string randomBytes(std::size_t n) {
  std::string out(n, '\0');
  if (RAND_bytes(reinterpret_cast<unsigned char*>(out.data()), static_cast<int>(n)) != 1) {
    throw std::runtime_error("RAND_bytes failed");
  }
  return out;
}

std::string pbkdf2(std::string_view password, std::string_view salt, unsigned iterations) {
  std::string out(kHashBytes, '\0');
  int ok = PKCS5_PBKDF2_HMAC(password.data(), static_cast<int>(password.size()),
                             reinterpret_cast<const unsigned char*>(salt.data()),
                             static_cast<int>(salt.size()), static_cast<int>(iterations),
                             EVP_sha256(), static_cast<int>(out.size()),
                             reinterpret_cast<unsigned char*>(out.data()));
  if (ok != 1) throw std::runtime_error("PKCS5_PBKDF2_HMAC failed");
  return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

}  // namespace

std::string hashPassword(std::string_view password, unsigned iterations) {
  std::string salt = randomBytes(16);
  return "pbkdf2-sha256$" + std::to_string(iterations) + "$" + toHex(salt) + "$" +
         toHex(pbkdf2(password, salt, iterations));
}

bool verifyPassword(std::string_view encoded, std::string_view password) {
  auto parts = split(encoded, '$');
  if (parts.size() != 4 || parts[0] != "pbkdf2-sha256") return false;
  unsigned long iterations = 0;
  try {
    iterations = std::stoul(parts[1]);
  } catch (const std::exception&) {
    return false;
  }
  if (iterations == 0 || iterations > 10'000'000) return false;
  auto salt = fromHex(parts[2]);
  auto expected = fromHex(parts[3]);
  if (!salt || !expected || expected->size() != kHashBytes) return false;
  std::string actual = pbkdf2(password, *salt, static_cast<unsigned>(iterations));
  return CRYPTO_memcmp(actual.data(), expected->data(), kHashBytes) == 0;
}

UsersLoadResult loadUsers(std::string_view text) {
  UsersLoadResult result;
  std::istringstream in{std::string(text)};
  std::size_t lineNo = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineNo;
    auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    std::istringstream words{std::string(body)};
    std::string who, hash, extra;
    words >> who >> hash;
    if (!who.starts_with("user:") || who.size() == 5 || hash.empty() || (words >> extra)) {
      result.errorLine = lineNo;
      return result;
    }
    result.users[who.substr(5)] = hash;
  }
  return result;
}

std::string renderUsers(const std::map<std::string, std::string>& users) {
  std::string out;
  for (const auto& [id, hash] : users) out += "user:" + id + " " + hash + "\n";
  return out;
}

std::string randomToken() { return toHex(randomBytes(16)); }

std::string TokenRegistry::issue(const std::string& user, Clock::time_point now) {
  std::string token = randomToken();
  std::lock_guard lock(mutex_);
  sessions_[token] = {user, now};
  return token;
}

std::optional<std::string> TokenRegistry::resolve(const std::string& token,
                                                  Clock::time_point now) {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(token);
  if (it == sessions_.end()) return std::nullopt;
  if (now - it->second.lastUse > ttl_) {
    sessions_.erase(it);
    return std::nullopt;
  }
  it->second.lastUse = now;
  return it->second.user;
}

}  // namespace wikibridge
