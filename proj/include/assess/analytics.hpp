#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace assess::analytics {

/// Ten positional answers on a 1..5 agreement scale, in questionnaire order.
using SusResponse = std::array<int, 10>;

/// Standard SUS scoring: odd items contribute (v - 1), even items (5 - v),
/// total scaled by 2.5. Throws Error(OutOfRange) for values outside 1..5.
double sus_score(const SusResponse& response);

/// Throws Error(EmptyInput) for an empty list.
double sus_mean(std::span<const SusResponse> responses);

enum class TTestVariant { pooled, welch };

struct TTestResult {
  double t_statistic = 0.0;
  double degrees_of_freedom = 0.0;
  double p_value = 1.0;
  TTestVariant variant = TTestVariant::pooled;
};

/// Two-tailed two-sample t-test. Needs at least two finite values per
/// sample (InsufficientData / InvalidArgument otherwise). When both samples
/// have zero variance: equal means give t = 0, p = 1; different means give
/// t = +-inf, p = 0.
TTestResult t_test_two_sample(std::span<const double> a, std::span<const double> b,
                              TTestVariant variant = TTestVariant::pooled);

/// Regularized incomplete beta I_x(a, b) with the complement y = 1 - x
/// passed separately so callers can avoid cancellation.
double regularized_incomplete_beta(double a, double b, double x, double y);

/// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double students_t_two_tailed(double t, double df);

struct RunEvent {
  std::string taker;  // learner id or guest token
  std::int64_t timestamp = 0;
};

struct EngagementCounters {
  std::size_t unique_takers = 0;
  std::size_t total_runs = 0;
  std::size_t reruns = 0;
  bool operator==(const EngagementCounters&) const = default;
};

EngagementCounters engagement_counters(std::span<const RunEvent> log);

}  // namespace assess::analytics
