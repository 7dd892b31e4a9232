#pragma once

#include <vector>

#include "wlpp/experiment.hpp"
#include "wlpp/stats.hpp"

namespace wlpp {

/// Stream ids shared by `sample` and the suites: replicate r of experiment e draws from
/// RngStream(seed).child(e).child(r).
namespace stream_id {
inline constexpr std::uint64_t wishart = 1;
inline constexpr std::uint64_t lpp = 2;
inline constexpr std::uint64_t energy_joint = 3;
inline constexpr std::uint64_t energy_increments = 4;
inline constexpr std::uint64_t geometric_lpp = 5;
inline constexpr std::uint64_t kernel_sweep = 10;
inline constexpr std::uint64_t one_step = 11;
inline constexpr std::uint64_t rsk_exact = 20;
inline constexpr std::uint64_t rsk_chain = 21;
inline constexpr std::uint64_t schur = 22;
inline constexpr std::uint64_t haar = 30;
inline constexpr std::uint64_t initial = 31;
inline constexpr std::uint64_t standard_paths = 40;
inline constexpr std::uint64_t tilted_paths = 41;
inline constexpr std::uint64_t spectra_paths = 42;
inline constexpr std::uint64_t calibration = 50;
}  // namespace stream_id

/// Largest eigenvalue vs last-passage time: KS per grid time, plus energy tests on the
/// joint grid vector and on its increments when the grid has two or more times and
/// energy_reps > 0.
std::vector<TestReport> identity_suite(const ExperimentConfig& c);

/// Normalization sweep (N=2 quadrature and method agreement, N=3 Cauchy-Binet) and the
/// chi-square one-step law of the spectrum from c.z.
std::vector<TestReport> kernel_suite(const ExperimentConfig& c);

/// RSK top entry vs last-passage time, mass conservation, exhaustive Greene check on 3x3
/// arrays with entries <= 3, Markov chain check of the bottom row, Schur GT sum vs
/// bialternant.
std::vector<TestReport> rsk_suite(const ExperimentConfig& c);

/// Haar Monte Carlo for the HCIZ integral and the mean of the initial density.
std::vector<TestReport> hciz_suite(const ExperimentConfig& c);

/// Importance-sampled vs direct expectations of tr M(n) and the largest eigenvalue, and the
/// spectra density identity on random interlacing paths.
std::vector<TestReport> rn_suite(const ExperimentConfig& c);

/// Scaled geometric last-passage times vs exponential ones, KS per grid time.
std::vector<TestReport> geometric_limit_suite(const ExperimentConfig& c);

/// Null pass rates of the KS, chi-square and energy tests over 100 repetitions each at
/// level c.alpha, compared with the binomial 3-sigma band around 1 - alpha.
std::vector<TestReport> calibration_suite(const ExperimentConfig& c);

}  // namespace wlpp
