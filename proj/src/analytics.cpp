#include "assess/analytics.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "assess/error.hpp"

namespace assess::analytics {

double sus_score(const SusResponse& response) {
  int sum = 0;
  for (std::size_t i = 0; i < response.size(); ++i) {
    const int v = response[i];
    if (v < 1 || v > 5) {
      throw Error(ErrorCode::OutOfRange,
                  "SUS item " + std::to_string(i + 1) + " = " + std::to_string(v) + " outside 1..5");
    }
    sum += (i % 2 == 0) ? v - 1 : 5 - v;
  }
  return sum * 2.5;
}

double sus_mean(std::span<const SusResponse> responses) {
  if (responses.empty()) throw Error(ErrorCode::EmptyInput, "no SUS responses");
  double total = 0.0;
  for (const auto& r : responses) total += sus_score(r);
  return total / static_cast<double>(responses.size());
}

namespace {

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  constexpr int max_iter = 100000;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) return h;
  }
  return h;
}

struct Moments {
  double mean;
  double variance;  // unbiased
};

Moments moments(std::span<const double> xs) {
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, ss / (n - 1.0)};
}

void check_sample(std::span<const double> xs, const char* name) {
  if (xs.size() < 2) {
    throw Error(ErrorCode::InsufficientData, std::string("sample ") + name + " needs at least 2 values");
  }
  for (double x : xs) {
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, std::string("sample ") + name + " has a non-finite value");
  }
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x, double y) {
  if (!(a > 0.0 && b > 0.0) || x < 0.0 || y < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "incomplete beta arguments out of domain");
  }
  if (x == 0.0) return 0.0;
  if (y == 0.0) return 1.0;
  const double log_front = a * std::log(x) + b * std::log(y) + std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, y) / b;
}

double students_t_two_tailed(double t, double df) {
  if (!(df > 0.0)) throw Error(ErrorCode::InvalidArgument, "degrees of freedom must be positive");
  if (std::isnan(t)) throw Error(ErrorCode::InvalidArgument, "t statistic is NaN");
  if (std::isinf(t)) return 0.0;
  const double t2 = t * t;
  const double denom = df + t2;
  return regularized_incomplete_beta(df / 2.0, 0.5, df / denom, t2 / denom);
}

TTestResult t_test_two_sample(std::span<const double> a, std::span<const double> b, TTestVariant variant) {
  check_sample(a, "a");
  check_sample(b, "b");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const auto ma = moments(a);
  const auto mb = moments(b);
  const double diff = ma.mean - mb.mean;

  TTestResult out;
  out.variant = variant;
  double se2 = 0.0;
  if (variant == TTestVariant::pooled) {
    out.degrees_of_freedom = na + nb - 2.0;
    const double pooled = ((na - 1.0) * ma.variance + (nb - 1.0) * mb.variance) / out.degrees_of_freedom;
    se2 = pooled * (1.0 / na + 1.0 / nb);
  } else {
    const double va = ma.variance / na;
    const double vb = mb.variance / nb;
    se2 = va + vb;
    out.degrees_of_freedom = se2 > 0.0 ? se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0)) : na + nb - 2.0;
  }

  if (se2 == 0.0) {
    if (diff == 0.0) {
      out.t_statistic = 0.0;
      out.p_value = 1.0;
    } else {
      out.t_statistic = std::copysign(std::numeric_limits<double>::infinity(), diff);
      out.p_value = 0.0;
    }
    return out;
  }
  out.t_statistic = diff / std::sqrt(se2);
  out.p_value = students_t_two_tailed(out.t_statistic, out.degrees_of_freedom);
  return out;
}

EngagementCounters engagement_counters(std::span<const RunEvent> log) {
  std::set<std::string> takers;
  for (const auto& e : log) takers.insert(e.taker);
  EngagementCounters out;
  out.unique_takers = takers.size();
  out.total_runs = log.size();
  out.reruns = out.total_runs - out.unique_takers;
  return out;
}

}  // namespace assess::analytics
