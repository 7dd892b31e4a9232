#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "wlpp/sampling.hpp"

namespace wlpp {

/// Eigenvalues sorted decreasingly: a point of the Weyl chamber.
class Spectrum {
 public:
  Spectrum() = default;
  /// Throws ValidationError unless values[0] >= values[1] >= ...
  explicit Spectrum(std::vector<double> values);

  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] double sum() const;
  [[nodiscard]] double largest() const { return values_.front(); }
  /// True when all entries are pairwise distinct (interior of the chamber).
  [[nodiscard]] bool is_strict() const;

 private:
  std::vector<double> values_;
};

/// x interlaces below y: y[0] >= x[0] >= y[1] >= x[1] >= ... >= y[N-1] >= x[N-1].
bool interlaces(std::span<const double> lower, std::span<const double> upper, double tol = 0.0);

/// Complex Hermitian N x N matrix.
class HermitianMatrix {
 public:
  /// Validates |m - m^*| <= 1e-12 * max(1, |m|) entrywise and stores the symmetrized matrix.
  explicit HermitianMatrix(Eigen::MatrixXcd m);
  static HermitianMatrix zero(std::size_t n);

  [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  [[nodiscard]] const Eigen::MatrixXcd& matrix() const { return m_; }
  [[nodiscard]] double trace() const { return m_.trace().real(); }
  [[nodiscard]] double diagonal(std::size_t i) const;

 private:
  struct Unchecked {};
  HermitianMatrix(Eigen::MatrixXcd m, Unchecked) : m_(std::move(m)) {}
  friend HermitianMatrix add_rank_one(const HermitianMatrix&, const Eigen::VectorXcd&);
  friend HermitianMatrix conjugate_diagonal(const Eigen::MatrixXcd&, std::span<const double>);

  Eigen::MatrixXcd m_;
};

/// m + v v^*
HermitianMatrix add_rank_one(const HermitianMatrix& m, const Eigen::VectorXcd& v);
/// u diag(d) u^*
HermitianMatrix conjugate_diagonal(const Eigen::MatrixXcd& u, std::span<const double> d);

/// M(0), ..., M(n) of the generalized Wishart process along with the rates that generated it.
struct MatrixPath {
  std::vector<HermitianMatrix> states;
  ParameterSet params;

  [[nodiscard]] std::size_t horizon() const { return states.size() - 1; }
};

/// Null-start path: M(0) = 0, M(m) = M(m-1) + v v^* with v_i ~ CN(rate pi_i + pihat_m).
MatrixPath simulate_wishart_path(const ParameterSet& params, std::size_t horizon,
                                 RngStream& stream);

/// Largest eigenvalue of M(1), ..., M(n) along one null-start path; cheaper than
/// materializing the path.
std::vector<double> simulate_top_eigenvalues(const ParameterSet& params, std::size_t horizon,
                                             RngStream& stream);

/// Decreasing eigenvalues.
Spectrum hermitian_spectrum(const HermitianMatrix& m);

/// Throws ValidationError when a path breaks PSD, rank-one increments, interlacing or
/// monotone trace.
void validate_path(const MatrixPath& path);

/// Log of the density of the increments of `path` under P^{pi,pihat} relative to the
/// standard measure: sum over steps m and rows i of
/// log(pi_i + pihat_m) - (pi_i + pihat_m - 1) * (M_ii(m) - M_ii(m-1)).
double log_rn_derivative_increments(const MatrixPath& path, const ParameterSet& params);
double rn_derivative_increments(const MatrixPath& path, const ParameterSet& params);

/// U diag(mu) U^* with U Haar distributed.
HermitianMatrix sample_isospectral(const Spectrum& mu, RngStream& stream);

/// Density of the tilted initial law relative to the isospectral law m_mu:
/// c_N / h_pi(mu) * exp(-sum mu) * exp(-tr[(diag(pi) - I) M0]).
double rn_derivative_initial(const HermitianMatrix& m0, const Spectrum& mu,
                             std::span<const double> pi);

/// Draw M(0) from the tilted initial law by rejection against m_mu. The acceptance
/// ratio is exp(-(tr(diag(pi) M0) - min)), where min pairs the ascending pi with the
/// descending mu.
HermitianMatrix sample_tilted_initial(const Spectrum& mu, std::span<const double> pi,
                                      RngStream& stream);

/// Spectrum of M0 + v v^* with v_i ~ CN(rate pi_i + pihat_step); one step of the
/// process from a given state.
Spectrum step_spectrum(const HermitianMatrix& m0, const ParameterSet& params, std::size_t step,
                       RngStream& stream);

}  // namespace wlpp
