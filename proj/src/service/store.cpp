#include "assess/service/store.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace assess::service {

namespace fs = std::filesystem;

namespace {

std::optional<std::string> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (!fs::exists(path)) return std::nullopt;
    throw StoreError("cannot read " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomically(const fs::path& path, const std::string& content) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw StoreError("cannot write " + tmp);
    out << content;
    if (!out.flush()) throw StoreError("cannot write " + tmp);
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw StoreError("cannot replace " + path.string() + ": " + ec.message());
}

}  // namespace

bool valid_user_id(const std::string& id) {
  if (id.empty() || id.size() > 64 || id.front() == '.') return false;
  for (unsigned char c : id) {
    if (!(std::isalnum(c) || c == '.' || c == '_' || c == '@' || c == '-')) return false;
  }
  return true;
}

FileStore::FileStore(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_ / "profiles", ec);
  if (ec) throw StoreError("cannot create data directory " + root_.string() + ": " + ec.message());
}

std::optional<std::string> FileStore::read_bank() { return read_file(root_ / "bank.json"); }
void FileStore::write_bank(const std::string& document) { write_atomically(root_ / "bank.json", document); }

fs::path FileStore::profile_path(const std::string& learner_id) const {
  if (!valid_user_id(learner_id)) throw StoreError("invalid learner id '" + learner_id + "'");
  return root_ / "profiles" / (learner_id + ".json");
}

std::optional<std::string> FileStore::read_profile(const std::string& learner_id) {
  return read_file(profile_path(learner_id));
}

void FileStore::write_profile(const std::string& learner_id, const std::string& document) {
  write_atomically(profile_path(learner_id), document);
}

std::optional<std::string> FileStore::read_users() { return read_file(root_ / "users.json"); }
void FileStore::write_users(const std::string& document) { write_atomically(root_ / "users.json", document); }

void FileStore::append_run(const std::string& line) {
  std::lock_guard lock(append_mutex_);
  std::ofstream out(root_ / "runs.jsonl", std::ios::binary | std::ios::app);
  if (!out) throw StoreError("cannot append to run log");
  out << line << '\n';
}

std::vector<std::string> FileStore::read_runs() {
  std::vector<std::string> lines;
  std::ifstream in(root_ / "runs.jsonl");
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::optional<std::string> MemoryStore::read_bank() {
  std::lock_guard lock(mutex_);
  return bank_;
}
void MemoryStore::write_bank(const std::string& document) {
  std::lock_guard lock(mutex_);
  bank_ = document;
}
std::optional<std::string> MemoryStore::read_profile(const std::string& learner_id) {
  std::lock_guard lock(mutex_);
  auto it = profiles_.find(learner_id);
  if (it == profiles_.end()) return std::nullopt;
  return it->second;
}
void MemoryStore::write_profile(const std::string& learner_id, const std::string& document) {
  std::lock_guard lock(mutex_);
  profiles_[learner_id] = document;
  ++profile_writes_;
}
std::optional<std::string> MemoryStore::read_users() {
  std::lock_guard lock(mutex_);
  return users_;
}
void MemoryStore::write_users(const std::string& document) {
  std::lock_guard lock(mutex_);
  users_ = document;
}
void MemoryStore::append_run(const std::string& line) {
  std::lock_guard lock(mutex_);
  runs_.push_back(line);
}
std::vector<std::string> MemoryStore::read_runs() {
  std::lock_guard lock(mutex_);
  return runs_;
}
std::size_t MemoryStore::profile_writes() const {
  std::lock_guard lock(mutex_);
  return profile_writes_;
}

}  // namespace assess::service
