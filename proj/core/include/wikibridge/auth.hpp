#pragma once

// Password verification for users.auth and bearer tokens for the service.
//
// users.auth: one `user:<id> pbkdf2-sha256$<iterations>$<salt-hex>$<hash-hex>`
// per line; blank lines and `#` comments are ignored.

#include <chrono>
#include <cstddef>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

namespace wikibridge {

inline constexpr unsigned kDefaultPbkdf2Iterations = 100000;

// PBKDF2-HMAC-SHA256 with a random 16-byte salt, in the users.auth encoding.
std::string hashPassword(std::string_view password,
                         unsigned iterations = kDefaultPbkdf2Iterations);
bool verifyPassword(std::string_view encoded, std::string_view password);

struct UsersLoadResult {
  std::map<std::string, std::string> users;  // id -> encoded hash
  std::optional<std::size_t> errorLine;
};

UsersLoadResult loadUsers(std::string_view text);
std::string renderUsers(const std::map<std::string, std::string>& users);

// 128 random bits, hex encoded.
std::string randomToken();

class TokenRegistry {
 public:
  using Clock = std::chrono::system_clock;

  explicit TokenRegistry(std::chrono::seconds idleTtl = std::chrono::hours(24))
      : ttl_(idleTtl) {}

  std::string issue(const std::string& user, Clock::time_point now);
  // User owning the token; refreshes its idle timer. Expired tokens are dropped.
  std::optional<std::string> resolve(const std::string& token, Clock::time_point now);

 private:
  struct Session {
    std::string user;
    Clock::time_point lastUse;
  };
  std::chrono::seconds ttl_;
  std::mutex mutex_;
  std::unordered_map<std::string, Session> sessions_;
};

}  // namespace wikibridge
