#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "wlpp/sampling.hpp"

namespace wlpp {

enum class Verdict { pass, fail, inconclusive };

/// Outcome of one statistical or exact check. For pass/fail checks,
/// passed() <=> statistic <= threshold.
struct TestReport {
  std::string test_name;
  double statistic = 0.0;
  double threshold = 0.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  double alpha = 0.0;
  Verdict verdict = Verdict::inconclusive;
  std::string seed_info;
  std::string detail;

  [[nodiscard]] bool passed() const { return verdict == Verdict::pass; }
};

/// Sets verdict from statistic <= threshold.
TestReport decide(TestReport r);

std::string to_string(Verdict v);

/// Asymptotic Kolmogorov critical value c(alpha) = sqrt(-ln(alpha/2)/2).
double ks_critical_value(double alpha);

/// Two-sample Kolmogorov-Smirnov: D = sup |F_x - F_y| against
/// c(alpha) sqrt((n1+n2)/(n1 n2)). Inconclusive when either sample has fewer than 100 points.
TestReport ks_two_sample(std::span<const double> x, std::span<const double> y, double alpha);

/// One-sample Kolmogorov-Smirnov against an analytic CDF; threshold c(alpha)/sqrt(n).
TestReport ks_one_sample(std::span<const double> x, const std::function<double(double)>& cdf,
                         double alpha);

/// Pearson goodness of fit. Consecutive bins are merged until every merged bin expects
/// at least 5 counts. Inconclusive with fewer than two merged bins or no observations.
TestReport chi_square_binned(std::span<const std::uint64_t> observed,
                             std::span<const double> expected_probabilities, double alpha);

using PointSample = std::vector<std::vector<double>>;

/// Two-sample energy-distance test (Szekely-Rizzo) with statistic
/// n m / (n + m) * (2 E|X-Y| - E|X-X'| - E|Y-Y'|) and a permutation threshold at level
/// alpha. Permutation k draws its shuffle from stream.child(k).
TestReport energy_distance_test(const PointSample& x, const PointSample& y,
                                std::size_t permutations, double alpha, const RngStream& stream);

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

MeanEstimate estimate_mean(std::span<const double> values);

}  // namespace wlpp
