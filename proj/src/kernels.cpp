#include "wlpp/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "wlpp/errors.hpp"

namespace wlpp {

namespace {

constexpr double kConfluenceGap = 1e-4;

SignedLog signed_log_of(double x) {
  if (x == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
  return {std::log(std::abs(x)), x > 0 ? 1 : -1};
}

SignedLog log_det(const Eigen::MatrixXd& a) {
  if (a.rows() == 0) return {0.0, 1};
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const Eigen::MatrixXd& u = lu.matrixLU();
  SignedLog out{0.0, static_cast<int>(lu.permutationP().determinant())};
  for (Eigen::Index i = 0; i < u.rows(); ++i) out *= signed_log_of(u(i, i));
  return out;
}

double min_gap(std::span<const double> x) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) gap = std::min(gap, std::abs(x[i] - x[j]));
  }
  return gap;
}

double mean(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

Eigen::MatrixXd bidiagonal(std::span<const double> x) {
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    j(i, i) = x[static_cast<std::size_t>(i)];
    if (i + 1 < n) j(i, i + 1) = 1.0;
  }
  return j;
}

/// Divided differences of s -> exp(-s t) over the prefixes of `s`, for fixed t.
Eigen::VectorXd exp_divided_differences(std::span<const double> s, double t) {
  const Eigen::MatrixXd m = (-t * bidiagonal(s)).exp();
  return m.row(0).transpose();
}

void require_same_size(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw DomainError("dimension mismatch");
}

void require_strictly_decreasing(std::span<const double> z, const char* what) {
  for (std::size_t i = 1; i < z.size(); ++i) {
    if (!(z[i - 1] > z[i])) {
      throw DomainError(std::string(what) + " must lie in the interior of the Weyl chamber");
    }
  }
}

/// Beyond z_1 + cutoff the kernel is below exp(-700) times a polynomial factor; the
/// Gauss-Kronrod map of [a, inf) samples points where h_pi would overflow.
double tail_cutoff(const KernelParams& params) {
  const double slowest = *std::min_element(params.pi.begin(), params.pi.end()) + params.pihat_n;
  return 800.0 / slowest;
}

using Integrand = std::function<double(double)>;

double integrate_1d(const Integrand& f, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  double err = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, tol, &err);
  const double scale = std::max(std::abs(value), 1e-300);
  if (!std::isfinite(value) || err > 1e3 * tol * scale + 1e-14) {
    std::ostringstream os;
    os << "quadrature on [" << a << ", " << b << "] did not converge: value=" << value
       << " error_estimate=" << err << " tol=" << tol;
    throw NumericError(os.str());
  }
  return value;
}

/// Nested integration of f over prod_k [lo_k, hi_k], coordinates filled in order 0..N-1.
double integrate_box(const std::function<double(std::span<const double>)>& f,
                     std::span<const double> lo, std::span<const double> hi, double tol) {
  const std::size_t n = lo.size();
  std::vector<double> point(n);
  std::function<double(std::size_t)> level = [&](std::size_t k) -> double {
    if (k == n) return f(point);
    const Integrand inner = [&, k](double x) {
      point[k] = x;
      return level(k + 1);
    };
    return integrate_1d(inner, lo[k], hi[k], k == 0 ? tol : std::max(tol * 1e-2, 1e-14));
  };
  return level(0);
}

}  // namespace

double SignedLog::value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }

SignedLog& SignedLog::operator*=(const SignedLog& o) {
  sign *= o.sign;
  log_abs += o.log_abs;
  return *this;
}

SignedLog& SignedLog::operator/=(const SignedLog& o) {
  if (o.sign == 0) throw DegenerateStateError("division by zero in log space");
  sign *= o.sign;
  log_abs -= o.log_abs;
  return *this;
}

SignedLog operator*(SignedLog a, const SignedLog& b) { return a *= b; }
SignedLog operator/(SignedLog a, const SignedLog& b) { return a /= b; }

double vandermonde(std::span<const double> z) {
  double out = 1.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = i + 1; j < z.size(); ++j) out *= z[i] - z[j];
  }
  return out;
}

SignedLog log_vandermonde(std::span<const double> z) {
  SignedLog out;
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = i + 1; j < z.size(); ++j) out *= signed_log_of(z[i] - z[j]);
  }
  return out;
}

SignedLog log_h_pi(std::span<const double> pi, std::span<const double> z) {
  require_same_size(pi, z);
  const std::size_t n = pi.size();
  const double c = mean(z);
  const double d = mean(pi);
  std::vector<double> zs(z.begin(), z.end());
  std::vector<double> ps(pi.begin(), pi.end());
  for (auto& v : zs) v -= c;
  for (auto& v : ps) v -= d;
  // exp(-pi_i z_j) = exp(-ps_i zs_j) * exp(-pi_i c) * exp(-d z_j) * exp(d c)
  const double sum_pi = std::accumulate(pi.begin(), pi.end(), 0.0);
  const double sum_z = std::accumulate(z.begin(), z.end(), 0.0);
  SignedLog out{-c * sum_pi - d * sum_z + static_cast<double>(n) * d * c, 1};

  const auto dim = static_cast<Eigen::Index>(n);
  if (min_gap(pi) >= kConfluenceGap && min_gap(z) >= kConfluenceGap) {
    Eigen::MatrixXd a(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = 0; j < dim; ++j) {
        a(i, j) = std::exp(-ps[static_cast<std::size_t>(i)] * zs[static_cast<std::size_t>(j)]);
      }
    }
    out *= log_det(a);
    out /= log_vandermonde(ps);
    out /= log_vandermonde(zs);
    return out;
  }

  const Eigen::MatrixXd k = Eigen::kroneckerProduct(bidiagonal(ps), bidiagonal(zs)).eval();
  const Eigen::MatrixXd e = (-k).exp();
  Eigen::MatrixXd dd(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) dd(i, j) = e(0, i * dim + j);
  }
  out *= log_det(dd);
  return out;
}

double h_pi(std::span<const double> pi, std::span<const double> z) {
  return log_h_pi(pi, z).value();
}

double hciz_constant(std::size_t n) {
  if (n == 0) throw DomainError("hciz_constant needs N >= 1");
  double denom = 1.0;
  double fact = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    fact *= static_cast<double>(k);
    denom *= fact;
  }
  const bool negative = ((n * (n - 1) / 2) % 2) == 1;
  return (negative ? -1.0 : 1.0) / denom;
}

KernelParams::KernelParams(std::vector<double> pi_in, double pihat)
    : pi(std::move(pi_in)), pihat_n(pihat) {
  ParameterSet check(pi, {pihat_n});
}

double q_density(std::span<const double> z, std::span<const double> z_next) {
  require_same_size(z, z_next);
  require_strictly_decreasing(z, "q_density start state");
  if (!interlaces(z, z_next)) return 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) sum += z_next[k] - z[k];
  return vandermonde(z_next) / vandermonde(z) * std::exp(-sum);
}

SignedLog log_q_pihat_density(std::span<const double> z, std::span<const double> z_next,
                              const KernelParams& params) {
  require_same_size(z, z_next);
  require_same_size(z, params.pi);
  require_strictly_decreasing(z, "q_pihat_density start state");
  if (!interlaces(z, z_next)) return {-std::numeric_limits<double>::infinity(), 0};
  const SignedLog dz_next = log_vandermonde(z_next);
  if (dz_next.sign == 0) return dz_next;

  const SignedLog h_from = log_h_pi(params.pi, z);
  if (h_from.sign == 0) throw DegenerateStateError("h_pi vanishes at the start state");
  const SignedLog h_to = log_h_pi(params.pi, z_next);

  double log_c = 0.0;
  for (double p : params.pi) log_c += std::log(p + params.pihat_n);
  double sum = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) sum += z_next[k] - z[k];

  SignedLog out{log_c - params.pihat_n * sum, 1};
  out *= h_to;
  out /= h_from;
  out *= dz_next;
  out /= log_vandermonde(z);
  return out;
}

double q_pihat_density(std::span<const double> z, std::span<const double> z_next,
                       const KernelParams& params) {
  const SignedLog v = log_q_pihat_density(z, z_next, params);
  if (v.sign < 0) {
    throw NumericError("q_pihat_density evaluated negative: h_pi sign did not cancel");
  }
  return v.value();
}

double q_pihat_box_probability(std::span<const double> z, const KernelParams& params,
                               std::span<const double> lo, std::span<const double> hi,
                               double tol) {
  require_same_size(z, lo);
  require_same_size(z, hi);
  require_strictly_decreasing(z, "kernel start state");
  const std::size_t n = z.size();
  // Clip the box to the interlacing cell.
  std::vector<double> a(n), b(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double cell_lo = z[k];
    const double cell_hi = k == 0 ? std::numeric_limits<double>::infinity() : z[k - 1];
    a[k] = std::max(lo[k], cell_lo);
    b[k] = std::min(hi[k], cell_hi);
    if (!(b[k] > a[k])) return 0.0;
  }
  const SignedLog h_from = log_h_pi(params.pi, z);
  const SignedLog dz_from = log_vandermonde(z);
  double log_c = 0.0;
  for (double p : params.pi) log_c += std::log(p + params.pihat_n);
  const double sum_from = std::accumulate(z.begin(), z.end(), 0.0);

  const double cutoff = z[0] + tail_cutoff(params);
  const auto density = [&](std::span<const double> zn) {
    if (!(zn[0] < cutoff)) return 0.0;
    SignedLog v{log_c - params.pihat_n * (std::accumulate(zn.begin(), zn.end(), 0.0) - sum_from),
                1};
    v *= log_h_pi(params.pi, zn);
    v *= log_vandermonde(zn);
    v /= h_from;
    v /= dz_from;
    return v.value();
  };
  return integrate_box(density, a, b, tol);
}

double kernel_normalization(std::span<const double> z, const KernelParams& params,
                            NormalizationMethod method, double tol) {
  require_same_size(z, params.pi);
  require_strictly_decreasing(z, "kernel start state");
  const std::size_t n = z.size();
  if (method == NormalizationMethod::quadrature) {
    std::vector<double> lo(n, -std::numeric_limits<double>::infinity());
    std::vector<double> hi(n, std::numeric_limits<double>::infinity());
    return q_pihat_box_probability(z, params, lo, hi, tol);
  }

  // Cauchy-Binet: the indicator of interlacing is det{1(z_i < z'_j)}, so the integral over
  // the chamber collapses to a determinant of one-dimensional integrals. Rows are taken in
  // divided-difference form in pi, in numerator and denominator alike.
  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd integrals(dim, dim);
  Eigen::MatrixXd boundary(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double zj = z[static_cast<std::size_t>(j)];
    const Eigen::VectorXd at_z = exp_divided_differences(params.pi, zj);
    for (Eigen::Index i = 0; i < dim; ++i) {
      boundary(i, j) = at_z(i);
      const double cutoff = zj + tail_cutoff(params);
      const Integrand f = [&, i, cutoff](double t) {
        if (!(t < cutoff)) return 0.0;
        return std::exp(-params.pihat_n * t) * exp_divided_differences(params.pi, t)(i);
      };
      integrals(i, j) = integrate_1d(f, zj, std::numeric_limits<double>::infinity(), tol);
    }
  }
  double log_c = 0.0;
  for (double p : params.pi) log_c += std::log(p + params.pihat_n);
  const double sum_z = std::accumulate(z.begin(), z.end(), 0.0);
  SignedLog out{log_c + params.pihat_n * sum_z, 1};
  out *= log_det(integrals);
  out /= log_det(boundary);
  return out.value();
}

double log_rn_spectra(std::span<const Spectrum> path, const ParameterSet& params) {
  if (path.empty()) throw ValidationError("spectra path is empty");
  const std::size_t horizon = path.size() - 1;
  params.require_horizon(horizon);
  const std::size_t n = params.dim();
  for (const auto& s : path) {
    if (s.size() != n) throw ValidationError("spectrum dimension does not match pi");
  }
  double log_c = 0.0;
  double drift = 0.0;
  for (std::size_t r = 1; r <= horizon; ++r) {
    if (!interlaces(path[r - 1].values(), path[r].values(), 1e-12)) {
      throw ValidationError("spectra path violates interlacing at step " + std::to_string(r));
    }
    const double pihat_r = params.pihat()[r - 1];
    for (std::size_t i = 0; i < n; ++i) log_c += std::log(params.pi()[i] + pihat_r);
    drift -= pihat_r * (path[r].sum() - path[r - 1].sum());
  }
  drift += path[horizon].sum() - path[0].sum();
  SignedLog out{log_c + drift, 1};
  out *= log_h_pi(params.pi(), path[horizon].values());
  out /= log_h_pi(params.pi(), path[0].values());
  if (out.sign <= 0) throw NumericError("h_pi ratio along the spectra path is not positive");
  return out.log_abs;
}

double rn_spectra(std::span<const Spectrum> path, const ParameterSet& params) {
  return std::exp(log_rn_spectra(path, params));
}

}  // namespace wlpp
