#include "assess/service/auth.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/rand.h>

#include <stdexcept>
#include <vector>

namespace assess::service {

namespace {

constexpr int kPbkdf2Iterations = 20000;

std::string to_hex(const unsigned char* data, std::size_t n) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(n * 2);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(digits[data[i] >> 4]);
    out.push_back(digits[data[i] & 0xf]);
  }
  return out;
}

std::optional<std::string> from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) return std::nullopt;
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
  };
  std::string out;
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    const int hi = nibble(hex[i]);
    const int lo = nibble(hex[i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out.push_back(static_cast<char>(hi * 16 + lo));
  }
  return out;
}

bool equal_constant_time(std::string_view a, std::string_view b) {
  return a.size() == b.size() && CRYPTO_memcmp(a.data(), b.data(), a.size()) == 0;
}

}  // namespace

std::string_view to_string(Role role) {
  switch (role) {
    case Role::admin: return "admin";
    case Role::educator: return "educator";
    case Role::student: return "student";
    case Role::guest: return "guest";
  }
  return "?";
}

std::optional<Role> parse_role(std::string_view s) {
  if (s == "admin") return Role::admin;
  if (s == "educator") return Role::educator;
  if (s == "student") return Role::student;
  if (s == "guest") return Role::guest;
  return std::nullopt;
}

std::string random_hex(std::size_t bytes) {
  std::vector<unsigned char> buf(bytes);
  if (RAND_bytes(buf.data(), static_cast<int>(buf.size())) != 1) throw std::runtime_error("RAND_bytes failed");
  return to_hex(buf.data(), buf.size());
}

std::string hash_password(std::string_view password, std::string_view salt) {
  unsigned char out[32];
  if (PKCS5_PBKDF2_HMAC(password.data(), static_cast<int>(password.size()),
                        reinterpret_cast<const unsigned char*>(salt.data()), static_cast<int>(salt.size()),
                        kPbkdf2Iterations, EVP_sha256(), sizeof out, out) != 1) {
    throw std::runtime_error("PBKDF2 failed");
  }
  return to_hex(out, sizeof out);
}

bool UserRegistry::add(const std::string& user_id, std::string_view password, Role role) {
  Credential c{user_id, role, random_hex(16), {}};
  c.hash = hash_password(password, c.salt);
  return users_.emplace(user_id, std::move(c)).second;
}

std::optional<Role> UserRegistry::authenticate(const std::string& user_id, std::string_view password) const {
  Credential c;
  {
      auto it = users_.find(user_id);
    if (it == users_.end()) return std::nullopt;
    c = it->second;
  }
  if (!equal_constant_time(hash_password(password, c.salt), c.hash)) return std::nullopt;
  return c.role;
}

std::optional<Role> UserRegistry::role_of(const std::string& user_id) const {
  auto it = users_.find(user_id);
  if (it == users_.end()) return std::nullopt;
  return it->second.role;
}

std::size_t UserRegistry::size() const {
  return users_.size();
}

Json UserRegistry::to_json() const {
  Json users = Json::array();
  for (const auto& [id, c] : users_) {
    users.push_back(Json{{"user_id", id}, {"role", to_string(c.role)}, {"salt", c.salt}, {"hash", c.hash}});
  }
  return Json{{"users", users}};
}

UserRegistry UserRegistry::from_json(const Json& j) {
  UserRegistry reg;
  for (const auto& u : j.at("users")) {
    const auto role = parse_role(u.at("role").get<std::string>());
    if (!role) throw std::runtime_error("unknown role in user registry");
    Credential c{u.at("user_id").get<std::string>(), *role, u.at("salt").get<std::string>(),
                 u.at("hash").get<std::string>()};
    reg.users_.emplace(c.user_id, std::move(c));
  }
  return reg;
}

std::string TokenSigner::sign(const std::string& payload) const {
  unsigned char mac[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  HMAC(EVP_sha256(), secret_.data(), static_cast<int>(secret_.size()),
       reinterpret_cast<const unsigned char*>(payload.data()), payload.size(), mac, &len);
  return to_hex(mac, len);
}

std::string TokenSigner::issue(const std::string& user_id) const {
  const auto payload = to_hex(reinterpret_cast<const unsigned char*>(user_id.data()), user_id.size());
  return payload + "." + sign(payload);
}

std::optional<std::string> TokenSigner::verify(std::string_view token) const {
  const auto dot = token.find('.');
  if (dot == std::string_view::npos) return std::nullopt;
  const std::string payload(token.substr(0, dot));
  if (!equal_constant_time(sign(payload), token.substr(dot + 1))) return std::nullopt;
  return from_hex(payload);
}

}  // namespace assess::service
