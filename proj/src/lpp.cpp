#include "wlpp/lpp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>

#include "wlpp/errors.hpp"

namespace wlpp {

WeightMatrix::WeightMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), w_(std::move(row_major)) {
  if (w_.size() != rows_ * cols_) throw ValidationError("weight matrix size mismatch");
  for (double v : w_) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("weights must be finite and >= 0");
  }
}

WeightMatrix WeightMatrix::zeros(std::size_t rows, std::size_t cols) {
  return WeightMatrix(rows, cols, std::vector<double>(rows * cols, 0.0));
}

void WeightMatrix::set(std::size_t i, std::size_t j, double value) {
  if (i >= rows_ || j >= cols_) throw DomainError("weight index out of range");
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw ValidationError("weights must be finite and >= 0");
  }
  w_[i * cols_ + j] = value;
}

double WeightMatrix::total() const { return std::accumulate(w_.begin(), w_.end(), 0.0); }

std::vector<std::vector<double>> lpp_table(const WeightMatrix& w) {
  const std::size_t n = w.rows();
  const std::size_t m = w.cols();
  std::vector<std::vector<double>> y(n, std::vector<double>(m, 0.0));
  // First row and column are prefix sums; no -inf sentinels needed.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double best = 0.0;
      if (i > 0 && j > 0) {
        best = std::max(y[i - 1][j], y[i][j - 1]);
      } else if (i > 0) {
        best = y[i - 1][j];
      } else if (j > 0) {
        best = y[i][j - 1];
      }
      y[i][j] = best + w(i, j);
    }
  }
  return y;
}

double lpp_value(const WeightMatrix& w, std::size_t rows, std::size_t cols) {
  if (rows < 1 || rows > w.rows() || cols < 1 || cols > w.cols()) {
    throw DomainError("lpp_value index out of range");
  }
  return lpp_table(w)[rows - 1][cols - 1];
}

namespace {

void enumerate_paths(const WeightMatrix& w, std::size_t i, std::size_t j, double acc,
                     double& best) {
  acc += w(i, j);
  if (i + 1 == w.rows() && j + 1 == w.cols()) {
    best = std::max(best, acc);
    return;
  }
  if (i + 1 < w.rows()) enumerate_paths(w, i + 1, j, acc, best);
  if (j + 1 < w.cols()) enumerate_paths(w, i, j + 1, acc, best);
}

}  // namespace

double lpp_oracle(const WeightMatrix& w) {
  if (w.rows() == 0 || w.cols() == 0) throw DomainError("empty weight matrix");
  if (w.rows() + w.cols() > 22) throw SizeError("lpp_oracle needs rows + cols <= 22");
  double best = 0.0;
  enumerate_paths(w, 0, 0, 0.0, best);
  return best;
}

WeightMatrix sample_exponential_weights(const ParameterSet& params, std::size_t horizon,
                                        RngStream& stream) {
  params.require_horizon(horizon);
  WeightMatrix w = WeightMatrix::zeros(params.dim(), horizon);
  for (std::size_t j = 0; j < horizon; ++j) {
    for (std::size_t i = 0; i < params.dim(); ++i) {
      w.set(i, j, sample_exponential(stream, params.rate(i, j + 1)));
    }
  }
  return w;
}

WeightMatrix sample_geometric_weights(std::span<const double> a, std::span<const double> b,
                                      std::size_t horizon, RngStream& stream) {
  if (b.size() < horizon) throw ConfigError("b sequence shorter than the horizon");
  WeightMatrix w = WeightMatrix::zeros(a.size(), horizon);
  for (std::size_t j = 0; j < horizon; ++j) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double p = a[i] * b[j];
      if (!(p > 0.0 && p < 1.0)) throw ParameterError("a_i b_j must lie in (0,1)");
      w.set(i, j, sample_geometric_log(stream, std::log(a[i]) + std::log(b[j])));
    }
  }
  return w;
}

std::vector<double> simulate_lpp(const ParameterSet& params, std::size_t horizon,
                                 RngStream& stream) {
  const WeightMatrix w = sample_exponential_weights(params, horizon, stream);
  const auto y = lpp_table(w);
  return horizon == 0 ? std::vector<double>{} : y.back();
}

std::vector<double> simulate_geometric_lpp(const ParameterSet& params, std::size_t horizon,
                                           double scale, RngStream& stream) {
  params.require_horizon(horizon);
  if (!(scale > 0.0)) throw ParameterError("scale L must be > 0");
  const std::size_t n = params.dim();
  std::vector<double> log_a(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(params.pi()[i] < scale)) throw ParameterError("a_i = 1 - pi_i/L must be > 0");
    log_a[i] = std::log1p(-params.pi()[i] / scale);
  }
  WeightMatrix w = WeightMatrix::zeros(n, horizon);
  for (std::size_t j = 0; j < horizon; ++j) {
    const double pihat = params.pihat()[j];
    if (!(pihat < scale)) throw ParameterError("b_j = 1 - pihat_j/L must be > 0");
    const double log_b = std::log1p(-pihat / scale);
    for (std::size_t i = 0; i < n; ++i) w.set(i, j, sample_geometric_log(stream, log_a[i] + log_b));
  }
  std::vector<double> out = horizon == 0 ? std::vector<double>{} : lpp_table(w).back();
  for (double& v : out) v /= scale;
  return out;
}

}  // namespace wlpp
