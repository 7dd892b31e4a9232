#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wlpp/stats.hpp"

namespace wlpp {

inline constexpr const char* kVersion = "1.0.0";

/// Fully resolved experiment description. Every field has a default so a config file only
/// needs the values it changes.
struct ExperimentConfig {
  std::string kind = "wishart";  // sample: wishart | lpp | geometric-lpp
  std::string suite = "identity";  // verify: identity | kernel | rsk | hciz | rn | geometric-limit | calibration
  std::size_t n = 2;
  std::size_t horizon = 5;
  std::vector<std::size_t> grid = {1, 2, 5};
  std::vector<double> pi = {1.0, 1.0};
  std::vector<double> pihat = {0.0, 0.0, 0.0, 0.0, 0.0};
  std::size_t reps = 10000;
  double alpha = 0.01;
  std::uint64_t seed = 1;
  std::string out;
  double scale = 2000.0;             // L of the geometric model
  std::size_t permutations = 500;    // energy test
  std::size_t energy_reps = 2000;    // replicates fed to the energy test (<= reps)
  std::vector<double> mu = {2.0, 1.0};  // hciz: isospectral level
  std::vector<double> z = {2.0, 1.0};   // kernel: start state of the one-step law
  std::vector<double> a = {0.5, 0.5};   // rsk: geometric row parameters
  std::vector<double> b = {0.5, 0.5, 0.5, 0.5, 0.5};  // rsk: geometric column parameters
  std::size_t sweep = 20;           // kernel: random normalization cases per dimension
};

/// Throws ConfigError on unknown keys, wrong types or inconsistent values. Missing keys
/// keep their defaults; when "N" changes and "pi"/"pihat" are absent they are resized to
/// the standard values.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);

/// Throws ConfigError when the configuration is inconsistent.
void validate_config(const ExperimentConfig& c);

nlohmann::json report_to_json(const TestReport& r);

/// CSV with header "rep,t<g1>,t<g2>,..." and one row per replicate: the largest eigenvalue
/// (wishart) or last-passage time (lpp, geometric-lpp) at each grid time.
void write_samples(const ExperimentConfig& c, std::ostream& out);

struct VerifyOutcome {
  std::vector<TestReport> checks;
  [[nodiscard]] bool all_passed() const;
  [[nodiscard]] nlohmann::json to_json(const ExperimentConfig& c) const;
};

VerifyOutcome run_verification(const ExperimentConfig& c);

}  // namespace wlpp
