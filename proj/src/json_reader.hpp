#pragma once

// Field access over a Json value that reports the dotted path of whatever is
// missing or mistyped as Error(ParseError).

#include <string>
#include <vector>

#include "assess/error.hpp"
#include "assess/json.hpp"

namespace assess::detail {

class Reader {
 public:
  Reader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const Json& json() const noexcept { return j_; }
  const std::string& path() const noexcept { return path_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ParseError, path_ + ": " + what, {{ErrorCode::ParseError, path_, what}});
  }

  Reader field(const std::string& name) const {
    expect_object();
    auto it = j_.find(name);
    if (it == j_.end()) child_path(name).fail_missing();
    return Reader(*it, child_path(name).path_);
  }

  bool has(const std::string& name) const {
    expect_object();
    auto it = j_.find(name);
    return it != j_.end() && !it->is_null();
  }

  Reader at(std::size_t i) const { return Reader(j_.at(i), path_ + "[" + std::to_string(i) + "]"); }

  std::size_t size() const {
    expect_array();
    return j_.size();
  }

  void expect_object() const {
    if (!j_.is_object()) fail("expected object");
  }
  void expect_array() const {
    if (!j_.is_array()) fail("expected array");
  }

  std::string str() const {
    if (!j_.is_string()) fail("expected string");
    return j_.get<std::string>();
  }
  double number() const {
    if (!j_.is_number()) fail("expected number");
    return j_.get<double>();
  }
  long long integer() const {
    if (!j_.is_number_integer()) fail("expected integer");
    return j_.get<long long>();
  }
  bool boolean() const {
    if (!j_.is_boolean()) fail("expected boolean");
    return j_.get<bool>();
  }
  std::vector<std::string> strings() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i).str());
    return out;
  }

 private:
  Reader child_path(const std::string& name) const { return Reader(j_, path_.empty() ? name : path_ + "." + name); }
  [[noreturn]] void fail_missing() const {
    throw Error(ErrorCode::ParseError, path_ + ": missing field", {{ErrorCode::ParseError, path_, "missing field"}});
  }

  const Json& j_;
  std::string path_;
};

}  // namespace assess::detail
