#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "assess/bank.hpp"
#include "assess/levels.hpp"

namespace assess {

// Response payloads. Each question type accepts exactly one of these.
struct ChosenOption {
  std::string option;
  bool operator==(const ChosenOption&) const = default;
};
struct ChosenOptions {
  std::vector<std::string> options;
  bool operator==(const ChosenOptions&) const = default;
};
struct TruthValue {
  bool value = false;
  bool operator==(const TruthValue&) const = default;
};
struct BlankFills {
  std::map<std::string, std::string> fills;  // blank id -> text
  bool operator==(const BlankFills&) const = default;
};
struct Assignment {
  std::map<std::string, std::string> pairs;  // left/item/list id -> right/zone/option id
  bool operator==(const Assignment&) const = default;
};
struct Ordering {
  std::vector<std::string> order;
  bool operator==(const Ordering&) const = default;
};
struct Click {
  Point at;
  bool operator==(const Click&) const = default;
};
struct ScalePoint {
  int point = 0;
  bool operator==(const ScalePoint&) const = default;
};

using Response =
    std::variant<ChosenOption, ChosenOptions, TruthValue, BlankFills, Assignment, Ordering, Click, ScalePoint>;

/// A learner's answer. An empty response is an explicit skip.
struct Answer {
  std::string question_id;
  std::optional<Response> response;
  bool operator==(const Answer&) const = default;
};

struct ItemScore {
  std::string question_id;
  std::optional<double> score;  // [0,1]; empty for ungraded (likert) items
  double weight = 1.0;
  double weighted = 0.0;        // score * weight
  bool graded = true;
  bool operator==(const ItemScore&) const = default;
};

struct TopicResult {
  std::string topic_id;
  double percent = 0.0;  // [0,100]
  int item_count = 0;
  KnowledgeLevel inferred_level = KnowledgeLevel::low;
  bool operator==(const TopicResult&) const = default;
};

/// Throws ShapeMismatch when the response kind or its ids don't fit the
/// question, UnknownQuestion when the answer names another question.
ItemScore grade_item(const Question& question, const Answer& answer);

/// Each item counts toward its declared topics and their ancestors, limited
/// to topics inside the assessed subtrees (all topics when `assessed` is
/// empty). Topics without graded items are omitted. Sorted by topic id.
/// Throws UnknownQuestion.
std::vector<TopicResult> aggregate_topics(const QuestionBank& bank, const std::vector<ItemScore>& scores,
                                          const std::vector<std::string>& assessed);

/// Weighted percent over all graded items; empty when nothing was graded.
std::optional<double> overall_percent(const std::vector<ItemScore>& scores);

}  // namespace assess
