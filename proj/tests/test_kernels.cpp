#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "oracles.hpp"
#include "wlpp/errors.hpp"
#include "wlpp/kernels.hpp"
#include "wlpp/matrixproc.hpp"
#include "wlpp/stats.hpp"

using namespace wlpp;

namespace {

using Vec = std::vector<double>;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

/// q_pihat straight from its definition with the long double h oracle.
double q_pihat_oracle(const Vec& z, const Vec& zn, const Vec& pi, double pihat) {
  const double q = q_density(z, zn);
  if (q == 0.0) return 0.0;
  double c = 1.0, shift = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) {
    c *= pi[i] + pihat;
    shift += zn[i] - z[i];
  }
  const auto ratio = oracle::h_direct(pi, zn) / oracle::h_direct(pi, z);
  return c * static_cast<double>(ratio) * std::exp(-(pihat - 1.0) * shift) * q;
}

/// Integral of f over the N=2 interlacing cell above z, truncating z'_1 at z_1 + span.
double cell_integral_2(const Vec& z, const std::function<double(const Vec&)>& f, double span) {
  return oracle::simpson(
      [&](double a) {
        return oracle::simpson([&](double b) { return f(Vec{a, b}); }, z[1], z[0], 200);
      },
      z[0], z[0] + span, 4000);
}

}  // namespace

TEST_CASE("Vandermonde") {
  CHECK(vandermonde(Vec{3, 1}) == 2.0);
  CHECK(vandermonde(Vec{4, 2, 1}) == 6.0);
  CHECK(vandermonde(Vec{2, 2, 1}) == 0.0);
  CHECK(vandermonde(Vec{1, 2}) == -1.0);
  CHECK(log_vandermonde(Vec{2, 2}).sign == 0);
}

TEST_CASE("h_pi closed cases") {
  CHECK(h_pi(Vec{1.7}, Vec{0.6}) == doctest::Approx(std::exp(-1.7 * 0.6)).epsilon(1e-15));
  CHECK(h_pi(Vec{2, 1}, Vec{2, 1}) == doctest::Approx(std::exp(-5.0) - std::exp(-4.0)).epsilon(1e-13));
  for (double p : {0.3, 1.0, 2.5}) {
    const Vec z{2.2, 0.7};
    const double exact = -std::exp(-p * (z[0] + z[1]));
    CHECK(rel(h_pi(Vec{p, p}, z), exact) < 1e-12);
    CHECK(rel(h_pi(Vec{p + 1e-6, p}, z), exact) < 1e-5);
  }
  // Both vectors constant: det of the Taylor coefficients gives c_N exp(-N p z).
  CHECK(rel(h_pi(Vec{0.5, 0.5, 0.5}, Vec{1.2, 1.2, 1.2}), -0.5 * std::exp(-3 * 0.5 * 1.2)) < 1e-10);
  CHECK(rel(h_pi(Vec{1, 1, 1}, Vec{0, 0, 0}), -0.5) < 1e-12);
}

TEST_CASE("h_pi matches the determinant oracle away from confluence") {
  RngStream s(61);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 2 + static_cast<std::size_t>(s.uniform01() * 3);
    // Gaps of at least 0.05 in both vectors.
    Vec pi(n), z(n);
    for (std::size_t i = 0; i < n; ++i) {
      pi[i] = 0.2 + 0.3 * i + 0.25 * s.uniform01();
      z[i] = 4.0 - 0.6 * i - 0.5 * s.uniform01();
    }
    std::shuffle(pi.begin(), pi.end(), s);
    const auto ref = static_cast<double>(oracle::h_direct(pi, z));
    REQUIRE(rel(h_pi(pi, z), ref) < 1e-10);

    Vec perm = pi;
    std::rotate(perm.begin(), perm.begin() + 1, perm.end());
    REQUIRE(rel(h_pi(perm, z), h_pi(pi, z)) < 1e-10);
  }
}

TEST_CASE("h_pi is continuous across the confluent switch") {
  const Vec z{2.5, 1.1, 0.4};
  const Vec base{1.0, 0.7, 1.3};
  const double at = h_pi(Vec{1.0, 1.0, 1.3}, z);
  const double d4 = h_pi(Vec{1.0 + 1e-4, 1.0, 1.3}, z);
  const double d6 = h_pi(Vec{1.0 + 1e-6, 1.0, 1.3}, z);
  // First-order in epsilon: the 1e-6 gap is about 100 times closer than the 1e-4 gap.
  CHECK(std::abs(d6 - at) < std::abs(d4 - at) / 50.0);
  CHECK(rel(d4, at) < 1e-3);
  CHECK(rel(d6, at) < 1e-5);

  const double zc = h_pi(base, Vec{2.5, 2.5, 0.4});
  CHECK(rel(h_pi(base, Vec{2.5 + 1e-7, 2.5, 0.4}), zc) < 1e-6);
  CHECK(rel(h_pi(base, Vec{2.5 + 2e-4, 2.5, 0.4}), zc) < 1e-3);
}

TEST_CASE("HCIZ constant") {
  CHECK(hciz_constant(1) == 1.0);
  CHECK(hciz_constant(2) == -1.0);
  CHECK(hciz_constant(3) == doctest::Approx(-0.5));
  CHECK(hciz_constant(4) == doctest::Approx(1.0 / 12.0));
  CHECK_THROWS_AS(hciz_constant(0), DomainError);
}

TEST_CASE("HCIZ Monte Carlo at N=2") {
  const Vec pi{1.5, 0.5};
  const Vec mu{2.0, 1.0};
  RngStream s(62);
  const int n = 200000;
  double sum = 0.0;
  for (int r = 0; r < n; ++r) {
    const auto u = sample_haar_unitary(s, 2);
    double tr = 0.0;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) tr += pi[i] * std::norm(u(i, j)) * mu[j];
    }
    sum += std::exp(-tr);
  }
  CHECK(rel(sum / n, h_pi(pi, mu) / hciz_constant(2)) < 0.01);
}

TEST_CASE("standard kernel") {
  CHECK(q_density(Vec{1.0}, Vec{1.5}) == doctest::Approx(std::exp(-0.5)));
  CHECK(q_density(Vec{1.0}, Vec{0.5}) == 0.0);
  CHECK(oracle::simpson([](double t) { return q_density(Vec{1.0}, Vec{t}); }, 1.0, 41.0, 4000) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(q_density(Vec{2, 1}, Vec{3, 2.5}) == 0.0);
  CHECK_THROWS_AS(q_density(Vec{1, 1}, Vec{2, 1}), DomainError);

  const Vec z{2, 1};
  const double mass = cell_integral_2(z, [&](const Vec& zn) { return q_density(z, zn); }, 40.0);
  CHECK(std::abs(mass - 1.0) < 1e-8);
}

TEST_CASE("inhomogeneous kernel") {
  const KernelParams one({0.8}, 0.4);
  CHECK(q_pihat_density(Vec{1.0}, Vec{2.0}, one) == doctest::Approx(1.2 * std::exp(-1.2)).epsilon(1e-13));

  const KernelParams standard({1.0, 1.0, 1.0}, 0.0);
  const Vec z{3.0, 2.0, 0.5}, zn{3.5, 2.5, 1.0};
  CHECK(q_pihat_density(z, zn, standard) == doctest::Approx(q_density(z, zn)).epsilon(1e-12));

  RngStream s(63);
  for (int rep = 0; rep < 300; ++rep) {
    Vec pi(3), zz(3), znn(3);
    for (auto& v : pi) v = 0.2 + 2.0 * s.uniform01();
    zz[0] = 3.0 + s.uniform01();
    zz[1] = zz[0] - 0.1 - s.uniform01();
    zz[2] = zz[1] - 0.1 - s.uniform01();
    znn[0] = zz[0] + 3.0 * s.uniform01();
    znn[1] = zz[1] + (zz[0] - zz[1]) * s.uniform01();
    znn[2] = zz[2] + (zz[1] - zz[2]) * s.uniform01();
    const double pihat = s.uniform01();
    const double q = q_pihat_density(zz, znn, KernelParams(pi, pihat));
    REQUIRE(q >= 0.0);
    REQUIRE(rel(q, q_pihat_oracle(zz, znn, pi, pihat)) < 1e-8);
  }

  const Vec zz{2, 1};
  const Vec pi{1.5, 0.5};
  const double mass = cell_integral_2(
      zz, [&](const Vec& zn2) { return q_pihat_oracle(zz, zn2, pi, 0.3); }, 60.0);
  CHECK(std::abs(mass - 1.0) < 1e-7);
}

TEST_CASE("kernel normalization") {
  CHECK(kernel_normalization(Vec{0.7}, KernelParams({1.3}, 0.2), NormalizationMethod::quadrature) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(kernel_normalization(Vec{0.7}, KernelParams({1.3}, 0.2), NormalizationMethod::cauchy_binet) ==
        doctest::Approx(1.0).epsilon(1e-10));

  const KernelParams standard({1.0, 1.0}, 0.0);
  const double q = kernel_normalization(Vec{2, 1}, standard, NormalizationMethod::quadrature);
  const double cb = kernel_normalization(Vec{2, 1}, standard, NormalizationMethod::cauchy_binet);
  CHECK(std::abs(q - 1.0) < 1e-7);
  CHECK(std::abs(q - cb) < 1e-9);

  const KernelParams p2({1.5, 0.5}, 0.3);
  CHECK(std::abs(kernel_normalization(Vec{2, 1}, p2, NormalizationMethod::quadrature) - 1.0) < 1e-7);

  const KernelParams p3({1.0, 0.7, 1.3}, 0.5);
  CHECK(std::abs(kernel_normalization(Vec{3, 2, 1}, p3, NormalizationMethod::cauchy_binet) - 1.0) < 1e-5);
  const KernelParams tied({1.0, 1.0, 0.5}, 0.2);
  CHECK(std::abs(kernel_normalization(Vec{3, 1.5, 1}, tied, NormalizationMethod::cauchy_binet) - 1.0) < 1e-5);

  CHECK_THROWS_AS(kernel_normalization(Vec{1, 1}, standard, NormalizationMethod::quadrature), DomainError);
}

TEST_CASE("box probabilities partition the cell") {
  const KernelParams p({1.5, 0.5}, 0.3);
  const Vec z{2, 1};
  const double inf = std::numeric_limits<double>::infinity();
  const Vec cuts0{2.0, 2.5, 3.5, inf};
  const Vec cuts1{1.0, 1.4, 2.0};
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts0.size(); ++i) {
    for (std::size_t j = 0; j + 1 < cuts1.size(); ++j) {
      const double pr = q_pihat_box_probability(z, p, Vec{cuts0[i], cuts1[j]}, Vec{cuts0[i + 1], cuts1[j + 1]});
      CHECK(pr >= 0.0);
      total += pr;
    }
  }
  CHECK(std::abs(total - 1.0) < 1e-8);
  CHECK(q_pihat_box_probability(z, p, Vec{0.0, 0.0}, Vec{1.5, 0.9}) == 0.0);

  const double partial = q_pihat_box_probability(z, p, Vec{2.0, 1.0}, Vec{2.5, 1.4});
  const double ref = oracle::simpson(
      [&](double a) {
        return oracle::simpson([&](double b) { return q_pihat_oracle(z, Vec{a, b}, p.pi, 0.3); }, 1.0, 1.4, 200);
      },
      2.0, 2.5, 200);
  CHECK(rel(partial, ref) < 1e-8);
}

TEST_CASE("spectra path density") {
  const ParameterSet standard = ParameterSet::standard(2, 2);
  const std::vector<Spectrum> path{Spectrum({2, 1}), Spectrum({2.5, 1.5}), Spectrum({3, 2})};
  CHECK(rn_spectra(path, standard) == doctest::Approx(1.0).epsilon(1e-12));

  const ParameterSet one({0.8}, {0.4});
  const std::vector<Spectrum> step{Spectrum({1.0}), Spectrum({1.7})};
  const double expected = 1.2 * std::exp(-0.4 * 0.7) * std::exp(-0.8 * 0.7) * std::exp(0.7);
  CHECK(rn_spectra(step, one) == doctest::Approx(expected).epsilon(1e-13));

  const std::vector<Spectrum> broken{Spectrum({2, 1}), Spectrum({3, 2.5})};
  CHECK_THROWS_AS(rn_spectra(broken, standard), ValidationError);
}

TEST_CASE("product of kernels factors through rn_spectra") {
  const Vec pi{1.0, 0.7, 1.3};
  const Vec pihat{0.5, 0.0, 0.5, 0.0};
  const ParameterSet params(pi, pihat);
  RngStream s(64);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<Spectrum> path;
    Vec z{2.0 + s.uniform01(), 1.0 + 0.5 * s.uniform01(), 0.3 * s.uniform01()};
    path.emplace_back(z);
    for (int r = 0; r < 4; ++r) {
      Vec next{z[0] + 2.0 * s.uniform01(), z[1] + (z[0] - z[1]) * s.uniform01(),
               z[2] + (z[1] - z[2]) * s.uniform01()};
      z = next;
      path.emplace_back(z);
    }
    double lhs = 1.0, q = 1.0;
    for (std::size_t r = 1; r < path.size(); ++r) {
      const Vec a(path[r - 1].values().begin(), path[r - 1].values().end());
      const Vec b(path[r].values().begin(), path[r].values().end());
      lhs *= q_pihat_oracle(a, b, pi, pihat[r - 1]);
      q *= q_density(a, b);
    }
    REQUIRE(rel(rn_spectra(path, params) * q, lhs) < 1e-9);
  }
}

TEST_CASE("one-step chi-square separates tilted and flat starts") {
  const Spectrum z({2.0, 1.0});
  const Vec pi{1.5, 0.5};
  const ParameterSet params(pi, {0.3});
  const KernelParams kp(pi, 0.3);
  const double inf = std::numeric_limits<double>::infinity();
  const Vec e0{2.0, 2.4, 2.9, 3.5, 4.5, inf};
  const Vec e1{1.0, 1.25, 1.5, 1.75, 2.0};
  Vec probs;
  for (std::size_t i = 0; i + 1 < e0.size(); ++i) {
    for (std::size_t j = 0; j + 1 < e1.size(); ++j) {
      probs.push_back(q_pihat_box_probability(z.values(), kp, Vec{e0[i], e1[j]}, Vec{e0[i + 1], e1[j + 1]}));
    }
  }
  const auto run = [&](bool tilted, std::uint64_t seed) {
    RngStream s(seed);
    std::vector<std::uint64_t> obs(probs.size(), 0);
    for (int r = 0; r < 20000; ++r) {
      const auto m0 = tilted ? sample_tilted_initial(z, pi, s) : sample_isospectral(z, s);
      const auto sp = step_spectrum(m0, params, 1, s);
      const auto i = static_cast<std::size_t>(std::upper_bound(e0.begin(), e0.end(), sp[0]) - e0.begin() - 1);
      const auto j = std::min<std::size_t>(
          3, static_cast<std::size_t>(std::upper_bound(e1.begin(), e1.end(), sp[1]) - e1.begin() - 1));
      ++obs[i * 4 + j];
    }
    return chi_square_binned(obs, probs, 0.01);
  };
  CHECK(run(true, 65).passed());
  CHECK(run(false, 66).verdict == Verdict::fail);
}
