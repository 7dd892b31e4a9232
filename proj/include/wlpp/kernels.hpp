#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wlpp/matrixproc.hpp"
#include "wlpp/sampling.hpp"

namespace wlpp {

/// A real number stored as sign * exp(log_abs). sign == 0 encodes zero.
struct SignedLog {
  double log_abs = 0.0;
  int sign = 1;

  [[nodiscard]] double value() const;
  SignedLog& operator*=(const SignedLog& o);
  SignedLog& operator/=(const SignedLog& o);
};

SignedLog operator*(SignedLog a, const SignedLog& b);
SignedLog operator/(SignedLog a, const SignedLog& b);

/// prod_{i<j} (z_i - z_j).
double vandermonde(std::span<const double> z);
SignedLog log_vandermonde(std::span<const double> z);

/// det{exp(-pi_i z_j)} / (Delta(pi) Delta(z)), extended continuously to repeated entries.
///
/// With both gaps >= 1e-4 the determinant is evaluated directly. Otherwise the value is
/// det[E] where E_ij is the divided difference of exp(-s t) over s in {pi_1..pi_i} and
/// t in {z_1..z_j}, read off the first row of expm(-(J_pi kron J_z)) with J_x the
/// bidiagonal matrix holding x on its diagonal and ones above it.
SignedLog log_h_pi(std::span<const double> pi, std::span<const double> z);
double h_pi(std::span<const double> pi, std::span<const double> z);

/// Constant c_N with  int exp(-tr(diag(pi) U diag(mu) U^*)) dU = h_pi(mu) / c_N,
/// c_N = (-1)^{N(N-1)/2} / prod_{k=1}^{N-1} k!.
double hciz_constant(std::size_t n);

/// Row rates pi and the column rate pihat_n of one transition.
struct KernelParams {
  KernelParams(std::vector<double> pi, double pihat_n);

  std::vector<double> pi;
  double pihat_n;
};

/// Standard one-step eigenvalue kernel Q(z, dz') of the rank-one Wishart update.
/// Throws DomainError when z has repeated entries.
double q_density(std::span<const double> z, std::span<const double> z_next);

/// Inhomogeneous kernel prod(pi_i + pihat_n) * h_pi(z')/h_pi(z) * exp(-(pihat_n - 1) sum(z'-z)) * Q.
double q_pihat_density(std::span<const double> z, std::span<const double> z_next,
                       const KernelParams& params);
SignedLog log_q_pihat_density(std::span<const double> z, std::span<const double> z_next,
                              const KernelParams& params);

enum class NormalizationMethod { quadrature, cauchy_binet };

/// Total mass of q_pihat_density(z, .).
///
/// quadrature: nested adaptive Gauss-Kronrod over the interlacing cell
///   z'_1 in [z_1, inf), z'_k in [z_k, z_{k-1}].
/// cauchy_binet: det of one-dimensional integrals int_{z_j}^inf e^{-(pi_i + pihat) t} dt,
///   each computed by quadrature, divided by det{e^{-pi_i z_j}} (both in divided-difference
///   form in pi so repeated rates are allowed).
double kernel_normalization(std::span<const double> z, const KernelParams& params,
                            NormalizationMethod method, double tol = 1e-11);

/// Mass that q_pihat_density(z, .) assigns to the box prod_k [lo_k, hi_k] (hi_0 may be inf).
double q_pihat_box_probability(std::span<const double> z, const KernelParams& params,
                               std::span<const double> lo, std::span<const double> hi,
                               double tol = 1e-10);

/// Density of the spectra path mu^(0) < ... < mu^(n) under P^{pi,pihat} relative to the
/// standard measure:
/// C(n,N) * h_pi(mu^(n)) / h_pi(mu^(0))
///   * exp(-sum_i sum_r pihat_r [mu_i^(r) - mu_i^(r-1)] + sum_i [mu_i^(n) - mu_i^(0)]).
double rn_spectra(std::span<const Spectrum> path, const ParameterSet& params);
double log_rn_spectra(std::span<const Spectrum> path, const ParameterSet& params);

}  // namespace wlpp
