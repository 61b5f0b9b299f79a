#pragma once

// JSON forms of criteria, answers, results, profiles and reports. Parsers
// throw Error(ParseError) naming the offending field.

#include <optional>

#include "assess/analytics.hpp"
#include "assess/assessment.hpp"
#include "assess/json.hpp"
#include "assess/knowledge.hpp"
#include "assess/selection.hpp"

namespace assess {

Json to_json(const SelectionCriteria& criteria);
SelectionCriteria criteria_from_json(const Json& j);

/// `null` encodes a skip.
Json to_json(const std::optional<Response>& response);
/// Decodes a response for `question`; JSON that does not fit the question
/// type throws Error(ShapeMismatch) naming the question.
std::optional<Response> response_from_json(const Question& question, const Json& j);

Json to_json(const TopicResult& r);
TopicResult topic_result_from_json(const Json& j);
Json to_json(const std::vector<TopicResult>& results);

Json to_json(const WeaknessReport& report);
Json to_json(const SessionReport& report);

Json to_json(const SessionRecord& record);
SessionRecord session_record_from_json(const Json& j);
Json to_json(const LearnerProfile& profile);
LearnerProfile profile_from_json(const Json& j);

Json to_json(const analytics::TTestResult& r);
Json to_json(const analytics::EngagementCounters& c);
Json to_json(const analytics::RunEvent& e);
analytics::RunEvent run_event_from_json(const Json& j);

}  // namespace assess
