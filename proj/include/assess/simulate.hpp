#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "assess/analytics.hpp"
#include "assess/bank.hpp"
#include "assess/grading.hpp"
#include "assess/json.hpp"
#include "assess/selection.hpp"

namespace assess {

/// A response that earns exactly 1.0 (likert: the scale midpoint).
Response correct_response(const Question& q);
/// A response that earns exactly 0.0 (likert: the scale midpoint).
Response wrong_response(const Question& q);

struct SimulationPolicy {
  std::array<double, 3> correct_probability{1.0, 1.0, 1.0};  // easy, medium, difficult
  int runs_per_student = 1;
  EducationLevel education_level{3};  // used by profile-driven rules

  double probability(Difficulty d) const { return correct_probability[static_cast<int>(d) - 1]; }
};

/// Accepts `correct_probability` as a number or {easy, medium, difficult},
/// plus optional `runs_per_student` and `education_level`.
SimulationPolicy policy_from_json(const Json& j);

struct SimulationReport {
  int students = 0;
  std::size_t item_count = 0;
  std::vector<double> scores;  // overall percent per student, first run
  double mean_score = 0.0;
  std::map<std::string, std::array<int, 3>> topic_levels;  // topic -> low/good/high counts
  analytics::EngagementCounters engagement;
};

/// Runs `students` scripted learners through select -> answer -> grade ->
/// aggregate. Every learner sits the same selection (criteria.seed); each
/// answers with an independent stream derived from `seed`.
SimulationReport simulate(const QuestionBank& bank, const SelectionCriteria& criteria, int students,
                          const SimulationPolicy& policy, std::uint64_t seed);

Json to_json(const SimulationReport& report);

}  // namespace assess
