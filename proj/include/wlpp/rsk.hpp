#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wlpp/lpp.hpp"
#include "wlpp/matrixproc.hpp"
#include "wlpp/sampling.hpp"
#include "wlpp/stats.hpp"

namespace wlpp {

/// Triangular array x^1, ..., x^N with x^k of length k and consecutive levels
/// interlacing: x^k_{i+1} <= x^{k-1}_i <= x^k_i.
class GTPattern {
 public:
  /// Null pattern with N levels.
  explicit GTPattern(std::size_t levels);
  /// Throws ValidationError on wrong level lengths or broken interlacing.
  explicit GTPattern(std::vector<std::vector<double>> levels);

  [[nodiscard]] std::size_t depth() const { return levels_.size(); }
  /// Level k (0-based) has k + 1 entries.
  [[nodiscard]] const std::vector<double>& level(std::size_t k) const { return levels_[k]; }
  [[nodiscard]] const std::vector<double>& bottom() const { return levels_.back(); }
  [[nodiscard]] const std::vector<std::vector<double>>& levels() const { return levels_; }

  [[nodiscard]] bool is_valid(double tol = 0.0) const;

 private:
  friend GTPattern rsk_step(const GTPattern&, std::span<const double>);
  std::vector<std::vector<double>> levels_;
};

/// Weakly decreasing nonnegative integer parts.
class Partition {
 public:
  explicit Partition(std::vector<std::int64_t> parts);

  [[nodiscard]] const std::vector<std::int64_t>& parts() const { return parts_; }
  [[nodiscard]] std::int64_t size() const;
  /// Parts padded with zeros to length n; throws ValidationError if more than n nonzero parts.
  [[nodiscard]] std::vector<std::int64_t> padded(std::size_t n) const;

 private:
  std::vector<std::int64_t> parts_;
};

/// One RSK row-insertion step in Gelfand-Tsetlin coordinates: inserts the column
/// (column[0] letters 1, column[1] letters 2, ...) into the pattern. Max-plus form, valid
/// for real nonnegative input:
///   x^1_1'   = x^1_1 + c_1
///   x^k_1'   = max(x^k_1, x^{k-1}_1') + c_k
///   x^k_i'   = max(x^k_i, x^{k-1}_i') + min(x^k_{i-1}, x^{k-1}_{i-1}') - x^{k-1}_{i-1},  1 < i < k
///   x^k_k'   = x^k_k + min(x^k_{k-1}, x^{k-1}_{k-1}') - x^{k-1}_{k-1}
GTPattern rsk_step(const GTPattern& pattern, std::span<const double> column);

/// Patterns x(1), ..., x(steps) obtained by inserting the columns of `xi` into the null
/// pattern.
std::vector<GTPattern> rsk_apply(const WeightMatrix& xi, std::size_t steps);

/// Greene's maximum: total weight of k disjoint up-right paths in the first `cols` columns,
/// path r running from (1, r) to (N, cols - k + r). k is capped at min(N, cols).
/// Requires N, cols <= 6.
double greene_oracle(const WeightMatrix& xi, std::size_t k, std::size_t cols);

/// Number of GT patterns with bottom row lambda (Weyl dimension formula).
double gt_pattern_count(const Partition& lambda, std::size_t n);

/// All GT patterns with bottom row lambda padded to n parts; throws SizeError past 10^7.
std::vector<GTPattern> enumerate_gt_patterns(const Partition& lambda, std::size_t n);

/// a^x = a_1^{|x^1|} prod_{k>=2} a_k^{|x^k| - |x^{k-1}|}.
double gt_weight(const GTPattern& x, std::span<const double> a);

/// Schur polynomial as the sum of a^x over GT patterns with bottom row lambda.
/// Throws SizeError when there are more than 10^7 patterns.
double schur_gt(const Partition& lambda, std::span<const double> a);

/// Schur polynomial as the bialternant det{a_i^{lambda_j + N - j}} / det{a_i^{N - j}}.
/// Requires pairwise distinct a.
double schur_bialternant(const Partition& lambda, std::span<const double> a);

/// One-step law of the RSK bottom row with geometric input:
/// prod(1 - a_i b_n) s_{x'}(a) / s_x(a) b_n^{|x'| - |x|} 1{0 <= x < x'}.
double discrete_kernel_pmf(const Partition& x, const Partition& x_next, std::span<const double> a,
                           double b_n);

/// Goodness of fit of simulated RSK bottom-row transitions against discrete_kernel_pmf.
///
/// Runs `reps` independent chains of `horizon` steps on geometric input with parameters
/// a_i b_j. With `step` unset and b constant, transitions from every step are pooled;
/// otherwise only transitions into `step` (default: horizon) are used. The conditioning
/// state is the most visited predecessor state. Inconclusive below 100 visits.
TestReport rsk_chain_check(std::span<const double> a, std::span<const double> b,
                           std::size_t horizon, std::size_t reps, const RngStream& stream,
                           double alpha = 0.01, std::optional<std::size_t> step = std::nullopt);

/// a^x / s_lambda(a) for a pattern with bottom row lambda.
double initial_pattern_pmf(const GTPattern& x, const Partition& lambda, std::span<const double> a);

/// Density of the initial continuous pattern on the fiber {z : z^N = mu}:
/// c^z / |det{e^{-pi_i mu_j}} / Delta(pi)| with c = (e^{-pi_1}, ..., e^{-pi_N}).
/// Requires distinct mu.
double initial_gt_density(const GTPattern& z, const Spectrum& mu, std::span<const double> pi);

}  // namespace wlpp
