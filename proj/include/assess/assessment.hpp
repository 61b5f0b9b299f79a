#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "assess/bank.hpp"
#include "assess/grading.hpp"
#include "assess/knowledge.hpp"

namespace assess {

/// Post-submission feedback for one item. Explanations are attached only
/// to graded items the learner did not get fully right.
struct ItemFeedback {
  std::string question_id;
  std::optional<double> score;
  bool graded = true;
  bool correct = false;
  std::vector<std::string> topics;
  std::map<std::string, std::string> explanations;
  bool operator==(const ItemFeedback&) const = default;
};

ItemFeedback item_feedback(const Question& question, const ItemScore& score);

struct SessionReport {
  std::string session_id;
  std::vector<ItemFeedback> items;
  std::vector<TopicResult> topics;
  std::optional<double> overall_percent;
  WeaknessReport weakness;
  bool operator==(const SessionReport&) const = default;
};

/// Grades `items` (unanswered ones count as skips), aggregates per topic
/// over the assessed subtrees and builds the weakness report.
/// Throws UnknownQuestion for answers naming questions outside `items`.
SessionReport grade_session(const QuestionBank& bank, const std::string& session_id,
                            const std::vector<Question>& items, const std::vector<Answer>& answers,
                            const std::vector<std::string>& assessed_topics);

}  // namespace assess
