#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace assess::service {

class StoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Persistence behind the service: the bank document, one profile document
/// per learner, the credential registry and an append-only run log.
class DocumentStore {
 public:
  virtual ~DocumentStore() = default;

  virtual std::optional<std::string> read_bank() = 0;
  virtual void write_bank(const std::string& document) = 0;

  virtual std::optional<std::string> read_profile(const std::string& learner_id) = 0;
  virtual void write_profile(const std::string& learner_id, const std::string& document) = 0;

  virtual std::optional<std::string> read_users() = 0;
  virtual void write_users(const std::string& document) = 0;

  virtual void append_run(const std::string& line) = 0;
  virtual std::vector<std::string> read_runs() = 0;
};

/// Layout under `root`: bank.json, users.json, runs.jsonl, profiles/<id>.json.
/// Whole-document writes go through a temporary file and a rename.
class FileStore final : public DocumentStore {
 public:
  explicit FileStore(std::filesystem::path root);

  const std::filesystem::path& root() const noexcept { return root_; }

  std::optional<std::string> read_bank() override;
  void write_bank(const std::string& document) override;
  std::optional<std::string> read_profile(const std::string& learner_id) override;
  void write_profile(const std::string& learner_id, const std::string& document) override;
  std::optional<std::string> read_users() override;
  void write_users(const std::string& document) override;
  void append_run(const std::string& line) override;
  std::vector<std::string> read_runs() override;

 private:
  std::filesystem::path profile_path(const std::string& learner_id) const;

  std::filesystem::path root_;
  std::mutex append_mutex_;
};

class MemoryStore final : public DocumentStore {
 public:
  std::optional<std::string> read_bank() override;
  void write_bank(const std::string& document) override;
  std::optional<std::string> read_profile(const std::string& learner_id) override;
  void write_profile(const std::string& learner_id, const std::string& document) override;
  std::optional<std::string> read_users() override;
  void write_users(const std::string& document) override;
  void append_run(const std::string& line) override;
  std::vector<std::string> read_runs() override;

  std::size_t profile_writes() const;

 private:
  mutable std::mutex mutex_;
  std::optional<std::string> bank_;
  std::optional<std::string> users_;
  std::map<std::string, std::string> profiles_;
  std::vector<std::string> runs_;
  std::size_t profile_writes_ = 0;
};

/// Learner ids double as file names: 1-64 chars of [A-Za-z0-9._@-], not
/// starting with a dot.
bool valid_user_id(const std::string& id);

}  // namespace assess::service
