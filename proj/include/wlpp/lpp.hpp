#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wlpp/sampling.hpp"

namespace wlpp {

/// Nonnegative rows x cols array; row i is the "level" index, column j the time step.
class WeightMatrix {
 public:
  WeightMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);
  static WeightMatrix zeros(std::size_t rows, std::size_t cols);

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  /// 0-based access.
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return w_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, double value);
  [[nodiscard]] double total() const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> w_;
};

/// Last-passage table: entry (i, j) is the maximal weight of an up-right path from the
/// corner (0, 0) to (i, j).
std::vector<std::vector<double>> lpp_table(const WeightMatrix& w);

/// Y over the top-left `rows` x `cols` block, i.e. the last-passage time to (rows, cols)
/// in 1-based coordinates. Throws DomainError outside 1..rows(), 1..cols().
double lpp_value(const WeightMatrix& w, std::size_t rows, std::size_t cols);

/// Maximum path sum by listing every up-right path; requires rows + cols <= 22.
double lpp_oracle(const WeightMatrix& w);

/// W_ij ~ Exp(pi_i + pihat_j), i < N, j < horizon.
WeightMatrix sample_exponential_weights(const ParameterSet& params, std::size_t horizon,
                                        RngStream& stream);

/// xi_ij ~ Geometric(a_i b_j) with P(k) = (1 - a_i b_j)(a_i b_j)^k.
WeightMatrix sample_geometric_weights(std::span<const double> a, std::span<const double> b,
                                      std::size_t horizon, RngStream& stream);

/// Y(N, 1), ..., Y(N, n) on one exponential weight array.
std::vector<double> simulate_lpp(const ParameterSet& params, std::size_t horizon,
                                 RngStream& stream);

/// Y(N, 1)/L, ..., Y(N, n)/L with geometric weights of parameter
/// a_i b_j, a_i = 1 - pi_i/L, b_j = 1 - pihat_j/L.
std::vector<double> simulate_geometric_lpp(const ParameterSet& params, std::size_t horizon,
                                           double scale, RngStream& stream);

}  // namespace wlpp
