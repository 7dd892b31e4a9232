#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "wlpp/errors.hpp"
#include "wlpp/experiment.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::optional<std::string> out;
  std::optional<std::string> suite;
  std::optional<double> alpha;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "JSON config file");
  cmd->add_option("--seed", o.seed, "root seed");
  cmd->add_option("--reps", o.reps, "replicate count");
  cmd->add_option("--out", o.out, "output path (stdout when empty)");
  cmd->add_option("--alpha", o.alpha, "significance level");
}

wlpp::ExperimentConfig resolve(const Overrides& o) {
  nlohmann::json j = nlohmann::json::object();
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw IoError("cannot open config '" + o.config_path + "'");
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw wlpp::ConfigError(std::string("malformed config: ") + e.what());
    }
  }
  auto c = wlpp::config_from_json(j);
  if (o.seed) c.seed = *o.seed;
  if (o.reps) c.reps = *o.reps;
  if (o.out) c.out = *o.out;
  if (o.suite) c.suite = *o.suite;
  if (o.alpha) c.alpha = *o.alpha;
  wlpp::validate_config(c);
  return c;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open output '" + path + "'");
  f << text;
  f.close();
  if (!f) throw IoError("write to '" + path + "' failed");
}

int run_sample(const Overrides& o) {
  const auto c = resolve(o);
  std::ostringstream buf;
  wlpp::write_samples(c, buf);
  emit(c.out, buf.str());
  return kExitPass;
}

int run_verify(const Overrides& o) {
  const auto c = resolve(o);
  const auto outcome = wlpp::run_verification(c);
  emit(c.out, outcome.to_json(c).dump(2) + "\n");
  for (const auto& r : outcome.checks) {
    std::fprintf(stderr, "%-48s %-12s stat=%.6g thr=%.6g\n", r.test_name.c_str(),
                 wlpp::to_string(r.verdict).c_str(), r.statistic, r.threshold);
  }
  return outcome.all_passed() ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wishart eigenvalue / last-passage percolation experiments"};
  app.set_version_flag("--version", std::string(wlpp::kVersion));
  app.require_subcommand(1);

  Overrides sample_opts;
  auto* sample = app.add_subcommand("sample", "write per-replicate observables as CSV");
  add_common(sample, sample_opts);

  Overrides verify_opts;
  auto* verify = app.add_subcommand("verify", "run a verification suite and write a JSON report");
  add_common(verify, verify_opts);
  verify->add_option("--suite", verify_opts.suite,
                     "identity | kernel | rsk | hciz | rn | geometric-limit | calibration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfig;
  }

  try {
    if (sample->parsed()) return run_sample(sample_opts);
    return run_verify(verify_opts);
  } catch (const IoError& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return kExitIo;
  } catch (const wlpp::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const wlpp::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
}
