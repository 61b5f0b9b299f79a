#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "assess/question.hpp"
#include "assess/topics.hpp"

namespace assess {

/// Topic hierarchy plus the questions tagged against it. A value type:
/// copies are independent snapshots, and every mutation bumps `version()`.
class QuestionBank {
 public:
  QuestionBank() = default;

  /// Validates referential integrity and every question; all violations are
  /// aggregated into one Error(ValidationError).
  static QuestionBank from_parts(TopicHierarchy topics, std::vector<Question> questions,
                                 std::uint64_t version = 0);

  const TopicHierarchy& topics() const noexcept { return topics_; }
  const std::vector<Question>& questions() const noexcept { return questions_; }
  std::uint64_t version() const noexcept { return version_; }

  const Question* find(const std::string& id) const;
  const Question& at(const std::string& id) const;  // throws UnknownQuestion

  void add_topic(TopicNode node);
  void move_topic(const std::string& id, std::optional<std::string> new_parent);
  void rename_topic(const std::string& id, std::string name);
  // Throws TopicInUse while the topic has children or tagged questions.
  void remove_topic(const std::string& id);

  // Throws the first violation's code: MalformedKey, UnknownTopic,
  // DuplicateId, NonPositiveWeight, InvalidQuestion. All violations are
  // attached to the error.
  void add_question(Question q);
  void replace_question(Question q);
  void remove_question(const std::string& id);

  /// Ids of every question tagged anywhere in the subtree rooted at `topic_id`.
  std::set<std::string> topic_closure(const std::string& topic_id) const;

  /// Structural equality, version excluded.
  bool same_content(const QuestionBank& other) const {
    return topics_ == other.topics_ && questions_ == other.questions_;
  }

 private:
  std::vector<Violation> check_question(const Question& q) const;
  void reindex();

  TopicHierarchy topics_;
  std::vector<Question> questions_;
  std::unordered_map<std::string, std::size_t> index_;
  std::uint64_t version_ = 0;
};

}  // namespace assess
