#include "wlpp/sampling.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "wlpp/errors.hpp"

namespace wlpp {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::array<std::uint32_t, 2> derive_key(std::uint64_t root_seed,
                                        const std::vector<std::uint64_t>& path) {
  std::uint64_t h = splitmix64(root_seed);
  std::uint64_t depth = 0;
  for (std::uint64_t p : path) {
    ++depth;
    h = splitmix64(h ^ splitmix64(p + 0xD1B54A32D192ED03ULL * depth));
  }
  // Fold the path length in so [] and [0...] prefixes cannot collide trivially.
  h = splitmix64(h ^ (depth << 56));
  return {static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  constexpr std::uint64_t kM0 = 0xD2511F53;
  constexpr std::uint64_t kM1 = 0xCD9E8D57;
  constexpr std::uint32_t kW0 = 0x9E3779B9;
  constexpr std::uint32_t kW1 = 0xBB67AE85;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = kM0 * ctr[0];
    const std::uint64_t p1 = kM1 * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

RngStream::RngStream(std::uint64_t root_seed, std::vector<std::uint64_t> path)
    : root_seed_(root_seed), path_(std::move(path)), key_(derive_key(root_seed_, path_)) {}

RngStream RngStream::child(std::uint64_t index) const {
  auto path = path_;
  path.push_back(index);
  return RngStream(root_seed_, std::move(path));
}

std::uint64_t RngStream::next_u64() {
  if (buffered_words_ == 0) {
    buffer_ = philox4x32({static_cast<std::uint32_t>(block_),
                          static_cast<std::uint32_t>(block_ >> 32), 0, 0},
                         key_);
    ++block_;
    buffered_words_ = 4;
  }
  const int i = 4 - buffered_words_;
  buffered_words_ -= 2;
  return (static_cast<std::uint64_t>(buffer_[i]) << 32) | buffer_[i + 1];
}

double RngStream::uniform01() {
  // 53 random bits, shifted by half an ulp so 0 is never returned.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::standard_normal() {
  if (spare_normal_) {
    const double z = *spare_normal_;
    spare_normal_.reset();
    return z;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform01()));
  const double theta = 2.0 * std::numbers::pi * uniform01();
  spare_normal_ = r * std::sin(theta);
  return r * std::cos(theta);
}

std::string RngStream::provenance() const {
  std::ostringstream os;
  os << "seed=" << root_seed_ << " path=[";
  for (std::size_t i = 0; i < path_.size(); ++i) {
    if (i) os << ',';
    os << path_[i];
  }
  os << ']';
  return os.str();
}

ParameterSet::ParameterSet(std::vector<double> pi, std::vector<double> pihat)
    : pi_(std::move(pi)), pihat_(std::move(pihat)) {
  if (pi_.empty()) throw ParameterError("pi must have at least one entry");
  for (double p : pi_) {
    if (!(p > 0.0) || !std::isfinite(p)) throw ParameterError("pi entries must be finite and > 0");
  }
  for (double p : pihat_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw ParameterError("pihat entries must be finite and >= 0");
    }
  }
}

ParameterSet ParameterSet::standard(std::size_t n_rows, std::size_t horizon) {
  return ParameterSet(std::vector<double>(n_rows, 1.0), std::vector<double>(horizon, 0.0));
}

double ParameterSet::rate(std::size_t row, std::size_t step) const {
  if (row >= pi_.size() || step == 0 || step > pihat_.size()) {
    throw DomainError("rate index out of range");
  }
  return pi_[row] + pihat_[step - 1];
}

void ParameterSet::require_horizon(std::size_t horizon) const {
  if (horizon > pihat_.size()) {
    throw ConfigError("horizon " + std::to_string(horizon) + " exceeds pihat length " +
                      std::to_string(pihat_.size()));
  }
}

std::complex<double> sample_complex_gaussian(RngStream& stream, double rate) {
  if (!(rate > 0.0)) throw ParameterError("complex Gaussian rate must be > 0");
  const double sigma = std::sqrt(0.5 / rate);
  const double re = stream.standard_normal();
  const double im = stream.standard_normal();
  return {sigma * re, sigma * im};
}

double sample_exponential(RngStream& stream, double rate) {
  if (!(rate > 0.0)) throw ParameterError("exponential rate must be > 0");
  return -std::log(stream.uniform01()) / rate;
}

std::uint64_t sample_geometric(RngStream& stream, double p) {
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("geometric parameter must lie in (0,1)");
  return static_cast<std::uint64_t>(sample_geometric_log(stream, std::log(p)));
}

double sample_geometric_log(RngStream& stream, double log_p) {
  if (!(log_p < 0.0) || !std::isfinite(log_p)) {
    throw ParameterError("geometric parameter must lie in (0,1)");
  }
  // P(X >= k) = P(U <= p^k) = p^k.
  return std::floor(std::log(stream.uniform01()) / log_p);
}

Eigen::MatrixXcd sample_haar_unitary(RngStream& stream, std::size_t n) {
  if (n == 0) throw ParameterError("Haar unitary dimension must be >= 1");
  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd z(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) z(i, j) = sample_complex_gaussian(stream, 1.0);
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const std::complex<double> d = r(j, j);
    const double mag = std::abs(d);
    q.col(j) *= (mag > 0.0 ? d / mag : std::complex<double>(1.0, 0.0));
  }
  return q;
}

}  // namespace wlpp
