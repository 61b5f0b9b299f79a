#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "assess/json.hpp"

namespace assess::service {

enum class Role { admin, educator, student, guest };

std::string_view to_string(Role role);
std::optional<Role> parse_role(std::string_view s);

/// Admins hold every educator permission.
constexpr bool can_author(Role role) noexcept { return role == Role::admin || role == Role::educator; }

/// Hex of `bytes` bytes from the system CSPRNG.
std::string random_hex(std::size_t bytes);

/// PBKDF2-HMAC-SHA256, hex encoded.
std::string hash_password(std::string_view password, std::string_view salt);

struct Credential {
  std::string user_id;
  Role role = Role::student;
  std::string salt;
  std::string hash;
};

/// Credentials with salted hashes; the plaintext password is never kept.
/// Not synchronized.
class UserRegistry {
 public:
  // Returns false when the id is taken.
  bool add(const std::string& user_id, std::string_view password, Role role);
  std::optional<Role> authenticate(const std::string& user_id, std::string_view password) const;
  std::optional<Role> role_of(const std::string& user_id) const;
  std::size_t size() const;

  Json to_json() const;
  static UserRegistry from_json(const Json& j);

 private:
  std::map<std::string, Credential> users_;
};

/// Stateless bearer tokens: hex(user id) "." HMAC-SHA256(secret, user id).
class TokenSigner {
 public:
  explicit TokenSigner(std::string secret) : secret_(std::move(secret)) {}

  std::string issue(const std::string& user_id) const;
  /// The user id the token was issued for, if the signature checks out.
  std::optional<std::string> verify(std::string_view token) const;

 private:
  std::string sign(const std::string& payload) const;

  std::string secret_;
};

}  // namespace assess::service
