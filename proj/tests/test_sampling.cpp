#include <doctest.h>

#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "wlpp/errors.hpp"
#include "wlpp/sampling.hpp"

using namespace wlpp;

namespace {

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / (v.size() - 1);
}

}  // namespace

TEST_CASE("philox matches the Random123 known-answer vectors") {
  const auto zero = philox4x32({0, 0, 0, 0}, {0, 0});
  CHECK(zero[0] == 0x6627e8d5u);
  CHECK(zero[1] == 0xe169c58du);
  CHECK(zero[2] == 0xbc57ac4cu);
  CHECK(zero[3] == 0x9b00dbd8u);
  const auto ones = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                               {0xffffffffu, 0xffffffffu});
  CHECK(ones[0] == 0x408f276du);
  CHECK(ones[1] == 0x41c83b0eu);
  CHECK(ones[2] == 0xa20bc7c6u);
  CHECK(ones[3] == 0x6d5451fdu);
}

TEST_CASE("streams are reproducible and path dependent") {
  RngStream a(42, {1, 7});
  RngStream b = RngStream(42).child(1).child(7);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());

  RngStream c(42, {1, 8});
  RngStream d(43, {1, 7});
  RngStream e(42, {1, 7});
  int same_c = 0, same_d = 0;
  for (int i = 0; i < 100; ++i) {
    const auto v = e.next_u64();
    same_c += c.next_u64() == v;
    same_d += d.next_u64() == v;
  }
  CHECK(same_c == 0);
  CHECK(same_d == 0);
  CHECK(RngStream(5, {2, 3}).provenance() == "seed=5 path=[2,3]");
}

TEST_CASE("distinct streams are uncorrelated") {
  RngStream x(9, {0}), y(9, {1});
  const int n = 100000;
  double sxy = 0.0;
  for (int i = 0; i < n; ++i) sxy += (x.uniform01() - 0.5) * (y.uniform01() - 0.5);
  // Var of each product is 1/144.
  const double corr = sxy / n * 12.0;
  CHECK(std::abs(corr) < 3.0 / std::sqrt(n));
}

TEST_CASE("uniform01 stays in the open unit interval") {
  RngStream s(3);
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform01();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("complex Gaussian moments") {
  RngStream s(11);
  const int n = 100000;
  SUBCASE("rate 1: E|A|^2 = 1") {
    std::vector<double> sq(n);
    for (auto& v : sq) v = std::norm(sample_complex_gaussian(s, 1.0));
    CHECK(std::abs(mean(sq) - 1.0) < 3.0 / std::sqrt(n));
  }
  SUBCASE("rate 2: zero mean parts") {
    std::vector<double> re(n), im(n);
    for (int i = 0; i < n; ++i) {
      const auto a = sample_complex_gaussian(s, 2.0);
      re[i] = a.real();
      im[i] = a.imag();
    }
    const double sd = std::sqrt(0.25 / n);
    CHECK(std::abs(mean(re)) < 3.0 * sd);
    CHECK(std::abs(mean(im)) < 3.0 * sd);
  }
  SUBCASE("rate 1.5: Var Re A = 1/3") {
    std::vector<double> re(n);
    for (auto& v : re) v = sample_complex_gaussian(s, 1.5).real();
    // Var of the sample variance of a normal is 2 sigma^4 / (n - 1).
    const double sigma2 = 1.0 / 3.0;
    CHECK(std::abs(variance(re) - sigma2) < 3.0 * sigma2 * std::sqrt(2.0 / (n - 1)));
  }
  CHECK_THROWS_AS(sample_complex_gaussian(s, 0.0), ParameterError);
}

TEST_CASE("exponential sampler") {
  RngStream s(12);
  const int n = 100000;
  std::vector<double> v(n);
  for (auto& x : v) x = sample_exponential(s, 1.0);
  CHECK(std::abs(mean(v) - 1.0) < 3.0 / std::sqrt(n));
  for (auto& x : v) x = sample_exponential(s, 1.5);
  CHECK(std::abs(mean(v) - 2.0 / 3.0) < 3.0 * (2.0 / 3.0) / std::sqrt(n));
  CHECK_THROWS_AS(sample_exponential(s, 0.0), ParameterError);
  CHECK_THROWS_AS(sample_exponential(s, -1.0), ParameterError);
}

TEST_CASE("geometric sampler") {
  RngStream s(13);
  const int n = 100000;
  std::vector<double> v(n);
  for (auto& x : v) x = static_cast<double>(sample_geometric(s, 0.5));
  // Mean p/(1-p) = 1, variance p/(1-p)^2 = 2.
  CHECK(std::abs(mean(v) - 1.0) < 3.0 * std::sqrt(2.0 / n));

  std::uint64_t total = 0;
  for (int i = 0; i < 10000; ++i) total += sample_geometric(s, 1e-6);
  CHECK(total == 0);

  for (int i = 0; i < 1000; ++i) {
    const double x = static_cast<double>(sample_geometric(s, 0.99));
    REQUIRE(x >= 0.0);
    REQUIRE(x == std::floor(x));
  }
  CHECK_THROWS_AS(sample_geometric(s, 0.0), ParameterError);
  CHECK_THROWS_AS(sample_geometric(s, 1.0), ParameterError);

  for (auto& x : v) x = sample_geometric_log(s, std::log(0.5));
  CHECK(std::abs(mean(v) - 1.0) < 3.0 * std::sqrt(2.0 / n));
}

TEST_CASE("Haar unitary") {
  RngStream s(14);
  const auto u1 = sample_haar_unitary(s, 1);
  CHECK(std::abs(std::abs(u1(0, 0)) - 1.0) < 1e-14);

  for (std::size_t n : {2u, 3u, 5u}) {
    const auto u = sample_haar_unitary(s, n);
    const Eigen::MatrixXcd err = u * u.adjoint() - Eigen::MatrixXcd::Identity(n, n);
    CHECK(err.cwiseAbs().maxCoeff() <= 1e-12);
  }

  const int reps = 100000;
  std::vector<double> v(reps);
  for (auto& x : v) x = std::norm(sample_haar_unitary(s, 3)(0, 0));
  // |U_11|^2 ~ Beta(1, 2): variance 1/18.
  CHECK(std::abs(mean(v) - 1.0 / 3.0) < 3.0 * std::sqrt(1.0 / 18.0 / reps));
  CHECK_THROWS_AS(sample_haar_unitary(s, 0), ParameterError);
}

TEST_CASE("parameter set validation") {
  CHECK_NOTHROW(ParameterSet({1.0, 2.0}, {0.0, 0.5}));
  CHECK_THROWS_AS(ParameterSet({1.0, 0.0}, {0.0}), ParameterError);
  CHECK_THROWS_AS(ParameterSet({1.0}, {-0.1}), ParameterError);
  CHECK_THROWS_AS(ParameterSet({}, {0.0}), ParameterError);
  const ParameterSet p({1.0, 2.0}, {0.0, 0.5});
  CHECK(p.rate(1, 2) == doctest::Approx(2.5));
  CHECK_THROWS_AS(p.require_horizon(3), ConfigError);
  const auto std2 = ParameterSet::standard(3, 4);
  CHECK(std2.dim() == 3);
  CHECK(std2.horizon_capacity() == 4);
}
