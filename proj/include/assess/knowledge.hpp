#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "assess/grading.hpp"
#include "assess/levels.hpp"
#include "assess/selection.hpp"

namespace assess {

/// Milliseconds since the Unix epoch, as supplied by the caller's clock.
using Timestamp = std::int64_t;

struct SessionRecord {
  std::string session_id;
  Timestamp completed_at = 0;
  SelectionCriteria criteria;
  std::vector<TopicResult> results;
  std::map<std::string, KnowledgeLevel> levels;
  bool operator==(const SessionRecord&) const = default;
};

struct LearnerProfile {
  std::string learner_id;
  EducationLevel education_level{1};
  std::map<std::string, KnowledgeLevel> knowledge;
  std::vector<SessionRecord> history;  // oldest first, append-only
  bool operator==(const LearnerProfile&) const = default;
};

/// Outcome of one graded session, as handed to the profile.
struct SessionResults {
  std::string session_id;
  Timestamp completed_at = 0;
  SelectionCriteria criteria;
  std::vector<TopicResult> results;
  bool finalized = false;
};

/// Latest session wins per assessed topic; other topics keep their level.
/// Throws SessionNotFinal, or InvalidArgument when `completed_at` does not
/// follow the last history entry.
LearnerProfile update_profile(LearnerProfile profile, const SessionResults& session);

LearnerContext learner_context(const LearnerProfile& profile);

struct WeaknessEntry {
  std::string topic_id;
  double percent = 0.0;
  KnowledgeLevel level = KnowledgeLevel::low;
  bool weak = false;  // level == low
  bool operator==(const WeaknessEntry&) const = default;
};

struct ErroneousItem {
  std::string question_id;
  double score = 0.0;
  std::vector<std::string> concepts;  // declared topics of the question
  bool operator==(const ErroneousItem&) const = default;
};

struct WeaknessReport {
  std::vector<WeaknessEntry> entries;  // ascending percent, ties by topic id
  std::vector<ErroneousItem> erroneous;

  std::vector<WeaknessEntry> weaknesses() const;
  bool operator==(const WeaknessReport&) const = default;
};

WeaknessReport weakness_report(const std::vector<TopicResult>& results);

/// Also lists every graded item scoring below 1 with its concepts.
WeaknessReport weakness_report(const std::vector<TopicResult>& results, const std::vector<ItemScore>& scores,
                               const QuestionBank& bank);

}  // namespace assess
