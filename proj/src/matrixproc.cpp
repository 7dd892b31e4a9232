#include "wlpp/matrixproc.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "wlpp/errors.hpp"
#include "wlpp/kernels.hpp"

namespace wlpp {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kPsdTol = -1e-9;
constexpr double kRankOneTol = 1e-9;

Eigen::VectorXcd sample_column(const ParameterSet& params, std::size_t step, RngStream& stream) {
  const auto n = static_cast<Eigen::Index>(params.dim());
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = sample_complex_gaussian(stream, params.rate(static_cast<std::size_t>(i), step));
  }
  return v;
}

}  // namespace

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (!(values_[i - 1] >= values_[i])) {
      throw ValidationError("spectrum must be sorted decreasingly");
    }
  }
}

double Spectrum::sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

bool Spectrum::is_strict() const {
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (!(values_[i - 1] > values_[i])) return false;
  }
  return true;
}

bool interlaces(std::span<const double> lower, std::span<const double> upper, double tol) {
  if (lower.size() != upper.size()) return false;
  const std::size_t n = lower.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (upper[i] < lower[i] - tol) return false;
    if (i + 1 < n && lower[i] < upper[i + 1] - tol) return false;
  }
  return true;
}

HermitianMatrix::HermitianMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw ValidationError("Hermitian matrix must be square");
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  const double asym = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermitianTol * scale) {
    throw ValidationError("matrix is not Hermitian (asymmetry " + std::to_string(asym) + ")");
  }
  m_ = (0.5 * (m_ + m_.adjoint())).eval();
}

HermitianMatrix HermitianMatrix::zero(std::size_t n) {
  const auto d = static_cast<Eigen::Index>(n);
  return HermitianMatrix(Eigen::MatrixXcd::Zero(d, d), Unchecked{});
}

double HermitianMatrix::diagonal(std::size_t i) const {
  return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
}

HermitianMatrix add_rank_one(const HermitianMatrix& m, const Eigen::VectorXcd& v) {
  Eigen::MatrixXcd out = m.matrix() + v * v.adjoint();
  for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, i) = out(i, i).real();
  return HermitianMatrix(std::move(out), HermitianMatrix::Unchecked{});
}

HermitianMatrix conjugate_diagonal(const Eigen::MatrixXcd& u, std::span<const double> d) {
  Eigen::VectorXd diag(static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) diag(static_cast<Eigen::Index>(i)) = d[i];
  Eigen::MatrixXcd out = u * diag.asDiagonal() * u.adjoint();
  out = (0.5 * (out + out.adjoint())).eval();
  return HermitianMatrix(std::move(out), HermitianMatrix::Unchecked{});
}

Spectrum hermitian_spectrum(const HermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("Hermitian eigensolver failed");
  const Eigen::VectorXd& ev = solver.eigenvalues();  // ascending
  std::vector<double> values(ev.data(), ev.data() + ev.size());
  std::reverse(values.begin(), values.end());
  return Spectrum(std::move(values));
}

MatrixPath simulate_wishart_path(const ParameterSet& params, std::size_t horizon,
                                 RngStream& stream) {
  params.require_horizon(horizon);
  MatrixPath path{{HermitianMatrix::zero(params.dim())}, params};
  path.states.reserve(horizon + 1);
  for (std::size_t m = 1; m <= horizon; ++m) {
    path.states.push_back(add_rank_one(path.states.back(), sample_column(params, m, stream)));
  }
  return path;
}

std::vector<double> simulate_top_eigenvalues(const ParameterSet& params, std::size_t horizon,
                                             RngStream& stream) {
  params.require_horizon(horizon);
  std::vector<double> top;
  top.reserve(horizon);
  HermitianMatrix m = HermitianMatrix::zero(params.dim());
  for (std::size_t step = 1; step <= horizon; ++step) {
    m = add_rank_one(m, sample_column(params, step, stream));
    top.push_back(hermitian_spectrum(m).largest());
  }
  return top;
}

void validate_path(const MatrixPath& path) {
  if (path.states.empty()) throw ValidationError("path has no states");
  Spectrum prev = hermitian_spectrum(path.states.front());
  for (std::size_t m = 1; m < path.states.size(); ++m) {
    const auto& cur_m = path.states[m];
    const Spectrum cur = hermitian_spectrum(cur_m);
    const double scale = std::max(1.0, cur.largest());
    if (cur.values().back() < kPsdTol * scale) {
      throw ValidationError("state " + std::to_string(m) + " is not positive semidefinite");
    }
    const HermitianMatrix inc(cur_m.matrix() - path.states[m - 1].matrix());
    const Spectrum inc_sp = hermitian_spectrum(inc);
    if (inc_sp.size() > 1 && std::abs(inc_sp[1]) > kRankOneTol * std::max(1.0, inc.trace())) {
      throw ValidationError("increment " + std::to_string(m) + " is not rank one");
    }
    if (!interlaces(prev.values(), cur.values(), 1e-9 * scale)) {
      throw ValidationError("spectra fail to interlace at step " + std::to_string(m));
    }
    if (cur_m.trace() < path.states[m - 1].trace() - 1e-12 * scale) {
      throw ValidationError("trace decreased at step " + std::to_string(m));
    }
    prev = cur;
  }
}

double log_rn_derivative_increments(const MatrixPath& path, const ParameterSet& params) {
  const std::size_t horizon = path.horizon();
  params.require_horizon(horizon);
  const std::size_t n = params.dim();
  double out = 0.0;
  for (std::size_t m = 1; m <= horizon; ++m) {
    for (std::size_t i = 0; i < n; ++i) {
      const double inc = path.states[m].diagonal(i) - path.states[m - 1].diagonal(i);
      if (inc < -1e-9) {
        throw ValidationError("negative diagonal increment at step " + std::to_string(m));
      }
      const double rate = params.rate(i, m);
      out += std::log(rate) - (rate - 1.0) * inc;
    }
  }
  return out;
}

double rn_derivative_increments(const MatrixPath& path, const ParameterSet& params) {
  return std::exp(log_rn_derivative_increments(path, params));
}

HermitianMatrix sample_isospectral(const Spectrum& mu, RngStream& stream) {
  const Eigen::MatrixXcd u = sample_haar_unitary(stream, mu.size());
  return conjugate_diagonal(u, mu.values());
}

double rn_derivative_initial(const HermitianMatrix& m0, const Spectrum& mu,
                             std::span<const double> pi) {
  const std::size_t n = mu.size();
  if (m0.dim() != n || pi.size() != n) throw ValidationError("dimension mismatch");
  const Spectrum sp = hermitian_spectrum(m0);
  const double scale = std::max(1.0, std::abs(mu[0]));
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(sp[i] - mu[i]) > 1e-8 * scale) {
      throw ValidationError("spectrum of M0 does not match mu");
    }
  }
  // exp(-sum mu) * exp(-tr[(diag(pi) - I) M0]) = exp(-tr(diag(pi) M0)) since tr M0 = sum mu.
  double tilt = 0.0;
  for (std::size_t i = 0; i < n; ++i) tilt += pi[i] * m0.diagonal(i);
  const double c_n = hciz_constant(n);
  const SignedLog out =
      SignedLog{std::log(std::abs(c_n)) - tilt, c_n > 0 ? 1 : -1} / log_h_pi(pi, mu.values());
  return out.value();
}

HermitianMatrix sample_tilted_initial(const Spectrum& mu, std::span<const double> pi,
                                      RngStream& stream) {
  const std::size_t n = mu.size();
  if (pi.size() != n) throw ValidationError("dimension mismatch");
  std::vector<double> ascending(pi.begin(), pi.end());
  std::sort(ascending.begin(), ascending.end());
  double min_tilt = 0.0;
  for (std::size_t i = 0; i < n; ++i) min_tilt += ascending[i] * mu[i];
  for (;;) {
    HermitianMatrix m0 = sample_isospectral(mu, stream);
    double tilt = 0.0;
    for (std::size_t i = 0; i < n; ++i) tilt += pi[i] * m0.diagonal(i);
    if (stream.uniform01() <= std::exp(-(tilt - min_tilt))) return m0;
  }
}

Spectrum step_spectrum(const HermitianMatrix& m0, const ParameterSet& params, std::size_t step,
                       RngStream& stream) {
  if (m0.dim() != params.dim()) throw ValidationError("dimension mismatch");
  return hermitian_spectrum(add_rank_one(m0, sample_column(params, step, stream)));
}

}  // namespace wlpp
