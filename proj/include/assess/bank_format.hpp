#pragma once

#include <string>
#include <string_view>

#include "assess/bank.hpp"
#include "assess/json.hpp"

namespace assess {

inline constexpr int bank_format_version = 1;

enum class KeyVisibility { with_key, learner_view };

/// Serializes one question. `learner_view` drops `key` and `explanations`.
Json question_to_json(const Question& q, KeyVisibility visibility = KeyVisibility::with_key);

/// Parses one question. Structural problems (missing fields, wrong JSON
/// types) throw Error(ParseError) naming the field path; rule violations
/// (bad keys, weights, levels, unknown topics) are validated against `bank`
/// and thrown as the first violation's code with all violations attached.
Question question_from_json(const Json& j, const QuestionBank& bank);

Json topic_to_json(const TopicNode& node);
TopicNode topic_from_json(const Json& j, const std::string& path = "topic");

Json bank_to_json(const QuestionBank& bank);
QuestionBank bank_from_json(const Json& j);

/// Canonical text: two-space indented JSON followed by a newline.
std::string export_bank(const QuestionBank& bank);

/// Syntax errors throw Error(ParseError) with line/column; structural errors
/// throw ParseError with the field path; rule violations are aggregated into
/// one Error(ValidationError).
QuestionBank import_bank(std::string_view document);

}  // namespace assess
