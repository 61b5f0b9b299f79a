#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "assess/bank.hpp"
#include "assess/levels.hpp"

namespace assess {

struct ByDifficulty {
  Relation relation = Relation::match;
  Difficulty pivot = Difficulty::medium;
  bool operator==(const ByDifficulty&) const = default;
};

// Without an explicit pivot the learner's stored per-topic level is used.
struct ByKnowledge {
  Relation relation = Relation::match;
  std::optional<KnowledgeLevel> pivot;
  bool operator==(const ByKnowledge&) const = default;
};

// Without an explicit pivot the learner's profile education level is used.
struct ByEducation {
  Relation relation = Relation::match;
  std::optional<EducationLevel> pivot;
  bool operator==(const ByEducation&) const = default;
};

struct AutoMode {
  bool operator==(const AutoMode&) const = default;
};

using SelectionRule = std::variant<ByDifficulty, ByKnowledge, ByEducation, AutoMode>;

struct SelectionCriteria {
  std::vector<std::string> topics;
  SelectionRule rule = ByDifficulty{};
  int count = 10;
  std::uint64_t seed = 0;
  bool include_likert = false;

  bool operator==(const SelectionCriteria&) const = default;
};

/// What the selector knows about the learner. Guests leave `registered`
/// false and must carry pivots in the criteria instead.
struct LearnerContext {
  bool registered = false;
  std::optional<EducationLevel> education;
  std::map<std::string, KnowledgeLevel> knowledge;  // topic id -> level
};

/// Level used for a topic without a recorded knowledge entry.
inline constexpr KnowledgeLevel default_knowledge = KnowledgeLevel::good;

struct Selection {
  std::vector<Question> items;
  std::vector<std::string> clusters;  // narrowest subtopic of each item, parallel to `items`
  std::size_t candidate_count = 0;    // matches before count-limiting
  std::string diagnostic;             // set when the selection is empty
};

/// Filters the union of the requested topic closures by the rule, clusters
/// by narrowest subtopic (clusters in topic-id order, items by difficulty
/// then id) and samples down to `count` proportionally per cluster.
/// Throws UnknownTopic, MissingProfile, InvalidArgument.
Selection select(const QuestionBank& bank, const SelectionCriteria& criteria,
                 const LearnerContext& learner = {});

/// Profile-driven selection: per topic, education match and the difficulty
/// mapped from the learner's knowledge of that topic. Throws MissingProfile
/// for unregistered learners.
Selection select_auto(const QuestionBank& bank, const LearnerContext& learner,
                      const std::vector<std::string>& topics, int count, std::uint64_t seed = 0,
                      bool include_likert = false);

/// Largest-remainder split of `count` across clusters of the given sizes.
/// Sums to min(count, total).
std::vector<std::size_t> allocate_proportionally(const std::vector<std::size_t>& sizes, std::size_t count);

}  // namespace assess
