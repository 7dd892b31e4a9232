#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace wlpp {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3").
/// Maps a 128-bit counter under a 64-bit key to 128 pseudo-random bits.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Deterministic random stream addressed by (root_seed, path).
///
/// The key is a SplitMix64 hash chain over the seed and every path element; draws are
/// Philox blocks at consecutive counters under that key. Two streams with the same
/// address produce the same sequence regardless of which thread consumes them, and
/// streams with distinct paths use distinct keys.
class RngStream {
 public:
  explicit RngStream(std::uint64_t root_seed, std::vector<std::uint64_t> path = {});

  /// Stream at path + [index]; starts from a fresh counter.
  [[nodiscard]] RngStream child(std::uint64_t index) const;

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1).
  double uniform01();
  double standard_normal();

  [[nodiscard]] std::uint64_t root_seed() const { return root_seed_; }
  [[nodiscard]] const std::vector<std::uint64_t>& path() const { return path_; }
  /// "seed=<s> path=[a,b,...]"
  [[nodiscard]] std::string provenance() const;

  // UniformRandomBitGenerator, so std::shuffle and friends accept a stream.
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return next_u64(); }

 private:
  std::uint64_t root_seed_;
  std::vector<std::uint64_t> path_;
  std::array<std::uint32_t, 2> key_{};
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffered_words_ = 0;
  std::optional<double> spare_normal_;
};

/// Positive row rates pi (length N) and nonnegative column rates pihat.
/// Column m (1-based step index) uses pihat[m - 1].
class ParameterSet {
 public:
  ParameterSet(std::vector<double> pi, std::vector<double> pihat);

  /// pi = (1,...,1), pihat = (0,...,0) of the given lengths.
  static ParameterSet standard(std::size_t n_rows, std::size_t horizon);

  [[nodiscard]] std::size_t dim() const { return pi_.size(); }
  [[nodiscard]] std::size_t horizon_capacity() const { return pihat_.size(); }
  [[nodiscard]] const std::vector<double>& pi() const { return pi_; }
  [[nodiscard]] const std::vector<double>& pihat() const { return pihat_; }

  /// pi[row] + pihat[step - 1], row 0-based, step 1-based.
  [[nodiscard]] double rate(std::size_t row, std::size_t step) const;

  /// Throws ConfigError when the pihat sequence is shorter than the horizon.
  void require_horizon(std::size_t horizon) const;

 private:
  std::vector<double> pi_;
  std::vector<double> pihat_;
};

/// Complex Gaussian with E|A|^2 = 1/rate; real and imaginary parts independent N(0, 1/(2 rate)).
std::complex<double> sample_complex_gaussian(RngStream& stream, double rate);

/// Exponential variate with the given rate (mean 1/rate).
double sample_exponential(RngStream& stream, double rate);

/// P(X = k) = (1 - p) p^k on k = 0, 1, 2, ...
std::uint64_t sample_geometric(RngStream& stream, double p);

/// Same law as sample_geometric with p = exp(log_p); precise for p near 1.
double sample_geometric_log(RngStream& stream, double log_p);

/// N x N unitary distributed by normalized Haar measure (QR of a complex Ginibre matrix,
/// with the phases of R's diagonal moved into Q).
Eigen::MatrixXcd sample_haar_unitary(RngStream& stream, std::size_t n);

}  // namespace wlpp
