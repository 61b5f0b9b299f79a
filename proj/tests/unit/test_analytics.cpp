#include <doctest.h>

#include <functional>

#include <cmath>
#include <random>

#include "assess/analytics.hpp"
#include "assess/error.hpp"
#include "oracles.hpp"

using namespace assess;
using namespace assess::analytics;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("SUS canonical responses") {
  CHECK(sus_score({5, 1, 5, 1, 5, 1, 5, 1, 5, 1}) == 100.0);
  CHECK(sus_score({3, 3, 3, 3, 3, 3, 3, 3, 3, 3}) == 50.0);
  CHECK(sus_score({4, 2, 4, 2, 4, 2, 4, 2, 4, 2}) == 75.0);
  CHECK(sus_score({1, 5, 1, 5, 1, 5, 1, 5, 1, 5}) == 0.0);
  CHECK(code_of([] { sus_score({0, 1, 1, 1, 1, 1, 1, 1, 1, 1}); }) == ErrorCode::OutOfRange);
  CHECK(code_of([] { sus_score({1, 1, 1, 1, 1, 1, 1, 1, 1, 6}); }) == ErrorCode::OutOfRange);
}

TEST_CASE("SUS mean") {
  const std::vector<SusResponse> one{{5, 1, 5, 1, 5, 1, 5, 1, 5, 1}};
  CHECK(sus_mean(one) == 100.0);
  const std::vector<SusResponse> two{{3, 3, 3, 3, 3, 3, 3, 3, 3, 3}, {5, 1, 5, 1, 5, 1, 5, 1, 5, 1}};
  CHECK(sus_mean(two) == 75.0);
  CHECK(code_of([] { sus_mean({}); }) == ErrorCode::EmptyInput);

  // Ten responses scoring 80 and up, recomputed item by item.
  std::vector<SusResponse> cohort;
  double expected = 0;
  for (int k = 0; k < 10; ++k) {
    // Neutral (50) raised by 12 + k%8 steps of 2.5.
    SusResponse r{3, 3, 3, 3, 3, 3, 3, 3, 3, 3};
    int steps = 12 + k % 8;
    for (int i = 0; i < 10 && steps > 0; ++i) {
      const int room = 2;
      const int use = std::min(room, steps);
      r[i] = i % 2 == 0 ? r[i] + use : r[i] - use;
      steps -= use;
    }
    int sum = 0;
    for (int i = 0; i < 10; ++i) sum += i % 2 == 0 ? r[i] - 1 : 5 - r[i];
    expected += sum * 2.5;
    cohort.push_back(r);
  }
  CHECK(sus_mean(cohort) == doctest::Approx(expected / 10).epsilon(1e-15));
}

TEST_CASE("SUS mirror property") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> v(1, 5);
  for (int i = 0; i < 1000; ++i) {
    SusResponse r{};
    SusResponse m{};
    for (int k = 0; k < 10; ++k) {
      r[k] = v(rng);
      m[k] = 6 - r[k];
    }
    const double s = sus_score(r);
    CHECK(s + sus_score(m) == 100.0);
    CHECK(std::fmod(s, 2.5) == 0.0);
  }
}

TEST_CASE("t-test reference values") {
  const std::vector<double> a{1, 2, 3, 4, 5};
  const std::vector<double> b{2, 3, 4, 5, 6};
  const auto pooled = t_test_two_sample(a, b);
  CHECK(pooled.t_statistic == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(pooled.degrees_of_freedom == 8.0);
  // scipy.stats.ttest_ind reference.
  CHECK(std::abs(pooled.p_value - 0.34659350708733416) < 1e-12);

  const std::vector<double> c{1.1, 2.5, 3.3, 4.8, 5.0, 6.2};
  const std::vector<double> d{2.0, 2.9, 4.4, 7.1};
  const auto welch = t_test_two_sample(c, d, TTestVariant::welch);
  CHECK(std::abs(welch.t_statistic - -0.20967849519719645) < 1e-12);
  CHECK(std::abs(welch.degrees_of_freedom - 5.707326005422053) < 1e-9);
  CHECK(std::abs(welch.p_value - 0.841201664298463) < 1e-10);
  const auto pooled2 = t_test_two_sample(c, d);
  CHECK(std::abs(pooled2.t_statistic - -0.2182167666149015) < 1e-12);
  CHECK(std::abs(pooled2.p_value - 0.832723761294251) < 1e-10);
}

TEST_CASE("t-test edge cases") {
  const std::vector<double> a{1, 2, 3};
  const auto same = t_test_two_sample(a, a);
  CHECK(same.t_statistic == 0.0);
  CHECK(same.p_value == 1.0);
  CHECK(t_test_two_sample(a, a, TTestVariant::welch).p_value == 1.0);

  const std::vector<double> flat1{2, 2, 2};
  const std::vector<double> flat2{3, 3};
  CHECK(t_test_two_sample(flat1, flat1).p_value == 1.0);
  const auto apart = t_test_two_sample(flat1, flat2);
  CHECK(apart.p_value == 0.0);
  CHECK(std::isinf(apart.t_statistic));
  CHECK(apart.t_statistic < 0);

  const std::vector<double> single{1};
  CHECK(code_of([&] { t_test_two_sample(single, a); }) == ErrorCode::InsufficientData);
  const std::vector<double> bad{1, NAN};
  CHECK(code_of([&] { t_test_two_sample(bad, a); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("t-test agrees with the Boost oracle") {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> noise(0, 1);
  for (int i = 0; i < 200; ++i) {
    const int na = 2 + static_cast<int>(rng() % 30);
    const int nb = 2 + static_cast<int>(rng() % 30);
    const double shift = noise(rng) * 2;
    const double scale_b = 0.2 + (rng() % 50) / 10.0;
    std::vector<double> a, b;
    for (int k = 0; k < na; ++k) a.push_back(10 + noise(rng));
    for (int k = 0; k < nb; ++k) b.push_back(10 + shift + scale_b * noise(rng));
    for (bool welch : {false, true}) {
      const auto got = t_test_two_sample(a, b, welch ? TTestVariant::welch : TTestVariant::pooled);
      const auto want = assess::testing::boost_t_test(a, b, welch);
      CHECK(std::abs(got.t_statistic - want.t) <= 1e-9);
      CHECK(std::abs(got.degrees_of_freedom - want.df) <= 1e-9 * want.df);
      CHECK(std::abs(got.p_value - want.p) <= 1e-9);
    }
  }
}

TEST_CASE("t-test symmetry and invariances") {
  const std::vector<double> a{3.1, 4.5, 2.2, 5.9, 4.4};
  const std::vector<double> b{5.5, 6.1, 4.9, 7.3};
  const auto ab = t_test_two_sample(a, b);
  const auto ba = t_test_two_sample(b, a);
  CHECK(ab.t_statistic == doctest::Approx(-ba.t_statistic));
  CHECK(ab.p_value == doctest::Approx(ba.p_value));

  std::vector<double> a2, b2;
  for (double x : a) a2.push_back(3.0 * x + 100);
  for (double x : b) b2.push_back(3.0 * x + 100);
  const auto moved = t_test_two_sample(a2, b2);
  CHECK(moved.t_statistic == doctest::Approx(ab.t_statistic).epsilon(1e-10));
  CHECK(moved.p_value == doctest::Approx(ab.p_value).epsilon(1e-10));

  double previous = 1.1;
  for (double gap = 0; gap < 5; gap += 0.5) {
    std::vector<double> shifted;
    for (double x : a) shifted.push_back(x + gap);
    const auto r = t_test_two_sample(shifted, a);
    CHECK(r.p_value < previous);
    previous = r.p_value;
  }
}

TEST_CASE("incomplete beta edges") {
  CHECK(regularized_incomplete_beta(2, 3, 0, 1) == 0.0);
  CHECK(regularized_incomplete_beta(2, 3, 1, 0) == 1.0);
  // I_x(1, 1) = x
  CHECK(regularized_incomplete_beta(1, 1, 0.3, 0.7) == doctest::Approx(0.3).epsilon(1e-14));
  // I_x(a, b) + I_{1-x}(b, a) = 1
  CHECK(regularized_incomplete_beta(2.5, 4, 0.4, 0.6) + regularized_incomplete_beta(4, 2.5, 0.6, 0.4) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(students_t_two_tailed(0, 5) == 1.0);
}

TEST_CASE("engagement counters") {
  std::vector<RunEvent> log;
  for (int s = 0; s < 15; ++s) log.push_back({"s" + std::to_string(s), s});
  for (int r = 0; r < 33; ++r) log.push_back({"s" + std::to_string(r % 15), 100 + r});
  CHECK(engagement_counters(log) == EngagementCounters{15, 48, 33});
  CHECK(engagement_counters({}) == EngagementCounters{0, 0, 0});
  const std::vector<RunEvent> one{{"x", 1}, {"x", 2}, {"x", 3}};
  CHECK(engagement_counters(one) == EngagementCounters{1, 3, 2});
}
