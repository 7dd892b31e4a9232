#include "wlpp/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>

#include "wlpp/errors.hpp"
#include "wlpp/lpp.hpp"
#include "wlpp/matrixproc.hpp"
#include "wlpp/parallel.hpp"
#include "wlpp/sampling.hpp"
#include "wlpp/suites.hpp"

namespace wlpp {

using nlohmann::json;

namespace {

const std::set<std::string> kKinds = {"wishart", "lpp", "geometric-lpp"};
const std::set<std::string> kSuites = {"identity", "kernel", "rsk", "hciz",
                                       "rn", "geometric-limit", "calibration"};

template <typename T>
void read(const json& j, const char* key, T& into) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  try {
    into = it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

template <>
void read<std::size_t>(const json& j, const char* key, std::size_t& into) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  if (!it->is_number_unsigned()) {
    throw ConfigError(std::string("config key '") + key + "' must be a nonnegative integer");
  }
  into = it->get<std::size_t>();
}

std::vector<double> descending_levels(std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<double>(n - i);
  return v;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

std::vector<double> draw_row(const ExperimentConfig& c, const ParameterSet& params,
                             std::size_t horizon, RngStream& s) {
  if (c.kind == "wishart") return simulate_top_eigenvalues(params, horizon, s);
  if (c.kind == "lpp") return simulate_lpp(params, horizon, s);
  return simulate_geometric_lpp(params, horizon, c.scale, s);
}

std::uint64_t sample_stream_id(const std::string& kind) {
  if (kind == "wishart") return stream_id::wishart;
  if (kind == "lpp") return stream_id::lpp;
  return stream_id::geometric_lpp;
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {
      "kind", "suite", "N", "horizon", "grid", "pi", "pihat", "reps", "alpha", "seed", "out",
      "scale", "permutations", "energy_reps", "mu", "z", "a", "b", "sweep"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  ExperimentConfig c;
  read(j, "kind", c.kind);
  read(j, "suite", c.suite);
  read(j, "N", c.n);
  read(j, "horizon", c.horizon);
  read(j, "grid", c.grid);
  if (!j.contains("pi")) c.pi.assign(c.n, 1.0);
  if (!j.contains("pihat")) c.pihat.assign(c.horizon, 0.0);
  if (!j.contains("mu")) c.mu = descending_levels(c.n);
  if (!j.contains("z")) c.z = descending_levels(c.n);
  if (!j.contains("grid")) {
    c.grid.clear();
    for (std::size_t t : {1, 2, 5}) {
      if (t <= c.horizon) c.grid.push_back(t);
    }
    if (c.grid.empty() || c.grid.back() != c.horizon) c.grid.push_back(c.horizon);
  }
  read(j, "pi", c.pi);
  read(j, "pihat", c.pihat);
  read(j, "reps", c.reps);
  read(j, "alpha", c.alpha);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError("config key 'seed' must be a nonnegative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  read(j, "out", c.out);
  read(j, "scale", c.scale);
  read(j, "permutations", c.permutations);
  read(j, "energy_reps", c.energy_reps);
  read(j, "mu", c.mu);
  read(j, "z", c.z);
  read(j, "a", c.a);
  read(j, "b", c.b);
  read(j, "sweep", c.sweep);
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  return json{{"kind", c.kind},
              {"suite", c.suite},
              {"N", c.n},
              {"horizon", c.horizon},
              {"grid", c.grid},
              {"pi", c.pi},
              {"pihat", c.pihat},
              {"reps", c.reps},
              {"alpha", c.alpha},
              {"seed", c.seed},
              {"out", c.out},
              {"scale", c.scale},
              {"permutations", c.permutations},
              {"energy_reps", c.energy_reps},
              {"mu", c.mu},
              {"z", c.z},
              {"a", c.a},
              {"b", c.b},
              {"sweep", c.sweep}};
}

void validate_config(const ExperimentConfig& c) {
  require(kKinds.contains(c.kind), "unknown kind '" + c.kind + "'");
  require(kSuites.contains(c.suite), "unknown suite '" + c.suite + "'");
  require(c.n >= 1, "N must be at least 1");
  require(c.horizon >= 1, "horizon must be at least 1");
  require(c.pi.size() == c.n, "pi must have N entries");
  try {
    ParameterSet(c.pi, c.pihat).require_horizon(c.horizon);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  require(!c.grid.empty(), "grid must not be empty");
  for (std::size_t i = 0; i < c.grid.size(); ++i) {
    require(c.grid[i] >= 1 && c.grid[i] <= c.horizon, "grid times must lie in 1..horizon");
    require(i == 0 || c.grid[i] > c.grid[i - 1], "grid must be strictly increasing");
  }
  require(c.alpha > 0.0 && c.alpha < 1.0, "alpha must lie in (0,1)");
  const double fastest = *std::max_element(c.pi.begin(), c.pi.end()) +
                         *std::max_element(c.pihat.begin(), c.pihat.end());
  require(std::isfinite(c.scale) && c.scale > fastest,
          "scale must exceed every pi_i + pihat_j so geometric parameters lie in (0,1)");
  require(c.permutations >= 200, "permutations must be at least 200");
  require(c.mu.size() == c.n && strictly_decreasing(c.mu), "mu must be N strictly decreasing values");
  require(c.z.size() == c.n && strictly_decreasing(c.z), "z must be N strictly decreasing values");
  require(!c.a.empty() && !c.b.empty(), "a and b must not be empty");
  for (double v : c.a) require(v > 0.0 && v < 1.0, "a entries must lie in (0,1)");
  for (double v : c.b) require(v > 0.0 && v < 1.0, "b entries must lie in (0,1)");
  require(c.sweep >= 1, "sweep must be at least 1");
}

json report_to_json(const TestReport& r) {
  return json{{"test_name", r.test_name}, {"statistic", r.statistic}, {"threshold", r.threshold},
              {"n1", r.n1},           {"n2", r.n2},               {"alpha", r.alpha},
              {"verdict", to_string(r.verdict)}, {"seed_info", r.seed_info}, {"detail", r.detail}};
}

void write_samples(const ExperimentConfig& c, std::ostream& out) {
  validate_config(c);
  const ParameterSet params(c.pi, c.pihat);
  const std::size_t horizon = c.grid.back();
  const RngStream root = RngStream(c.seed).child(sample_stream_id(c.kind));

  out << "rep";
  for (std::size_t t : c.grid) out << ",t" << t;
  out << '\n';

  constexpr std::size_t kChunk = 4096;
  std::vector<std::vector<double>> rows;
  char buf[32];
  for (std::size_t start = 0; start < c.reps; start += kChunk) {
    const std::size_t count = std::min(kChunk, c.reps - start);
    rows.assign(count, {});
    parallel_for(count, [&](std::size_t i) {
      RngStream s = root.child(start + i);
      rows[i] = draw_row(c, params, horizon, s);
    });
    for (std::size_t i = 0; i < count; ++i) {
      out << (start + i);
      for (std::size_t t : c.grid) {
        std::snprintf(buf, sizeof buf, "%.17g", rows[i][t - 1]);
        out << ',' << buf;
      }
      out << '\n';
    }
  }
}

bool VerifyOutcome::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const TestReport& r) { return r.passed(); });
}

json VerifyOutcome::to_json(const ExperimentConfig& c) const {
  json checks_json = json::array();
  for (const auto& r : checks) checks_json.push_back(report_to_json(r));
  return json{{"suite", c.suite}, {"checks", checks_json}, {"config", config_to_json(c)},
              {"version", kVersion}};
}

VerifyOutcome run_verification(const ExperimentConfig& c) {
  validate_config(c);
  VerifyOutcome outcome;
  if (c.suite == "identity") {
    outcome.checks = identity_suite(c);
  } else if (c.suite == "kernel") {
    outcome.checks = kernel_suite(c);
  } else if (c.suite == "rsk") {
    outcome.checks = rsk_suite(c);
  } else if (c.suite == "hciz") {
    outcome.checks = hciz_suite(c);
  } else if (c.suite == "rn") {
    outcome.checks = rn_suite(c);
  } else if (c.suite == "geometric-limit") {
    outcome.checks = geometric_limit_suite(c);
  } else {
    outcome.checks = calibration_suite(c);
  }
  return outcome;
}

}  // namespace wlpp
