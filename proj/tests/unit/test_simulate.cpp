#include <doctest.h>

#include "assess/bank_format.hpp"
#include "assess/simulate.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace assess;

namespace {

const QuestionBank& fixture() {
  static const auto bank = import_bank(assess::testing::read_text(assess::testing::fixture_path("microeconomics.json")));
  return bank;
}

SelectionCriteria all_items() {
  return SelectionCriteria{{"micro"}, ByDifficulty{Relation::at_least, Difficulty::easy}, 30, 0, false};
}

SimulationPolicy flat(double p) {
  SimulationPolicy policy;
  policy.correct_probability.fill(p);
  return policy;
}

}  // namespace

TEST_CASE("perfect policy infers high everywhere") {
  const auto report = simulate(fixture(), all_items(), 5, flat(1.0), 1);
  CHECK(report.item_count == 29);
  for (double s : report.scores) CHECK(s == 100.0);
  CHECK(report.mean_score == 100.0);
  for (const auto& [topic, counts] : report.topic_levels) {
    CHECK(counts[0] == 0);
    CHECK(counts[1] == 0);
    CHECK(counts[2] == 5);
  }
  const auto zero = simulate(fixture(), all_items(), 3, flat(0.0), 1);
  for (double s : zero.scores) CHECK(s == 0.0);
}

TEST_CASE("same seed gives byte-identical reports") {
  const auto a = to_json(simulate(fixture(), all_items(), 15, flat(0.6), 42)).dump(2);
  const auto b = to_json(simulate(fixture(), all_items(), 15, flat(0.6), 42)).dump(2);
  const auto c = to_json(simulate(fixture(), all_items(), 15, flat(0.6), 43)).dump(2);
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("reruns feed engagement counters") {
  auto policy = flat(0.5);
  policy.runs_per_student = 3;
  const auto r = simulate(fixture(), all_items(), 4, policy, 9);
  CHECK(r.scores.size() == 4);
  CHECK(r.engagement == analytics::EngagementCounters{4, 12, 8});
}

TEST_CASE("cohort contrast verdict matches the oracle") {
  int agree = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto strong = simulate(fixture(), all_items(), 15, flat(0.85), 2 * seed);
    const auto weak = simulate(fixture(), all_items(), 15, flat(0.65), 2 * seed + 1);
    const auto got = analytics::t_test_two_sample(strong.scores, weak.scores);
    const auto want = assess::testing::boost_t_test(strong.scores, weak.scores, false);
    CHECK(std::abs(got.p_value - want.p) < 1e-9);
    agree += (got.p_value < 0.05) == (want.p < 0.05);
  }
  CHECK(agree == 20);
}

TEST_CASE("policy parsing") {
  auto p = policy_from_json(Json::parse(R"({"correct_probability": 0.7})"));
  CHECK(p.probability(Difficulty::difficult) == 0.7);
  p = policy_from_json(Json::parse(
      R"({"correct_probability": {"easy": 0.9, "medium": 0.6, "difficult": 0.3}, "runs_per_student": 2, "education_level": 4})"));
  CHECK(p.probability(Difficulty::easy) == 0.9);
  CHECK(p.probability(Difficulty::difficult) == 0.3);
  CHECK(p.runs_per_student == 2);
  CHECK(p.education_level.rank() == 4);
  CHECK_THROWS_AS(policy_from_json(Json::parse(R"({"correct_probability": 1.5})")), Error);
  CHECK_THROWS_AS(policy_from_json(Json::parse(R"({})")), Error);
}
