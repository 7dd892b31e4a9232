#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "wlpp/errors.hpp"
#include "wlpp/experiment.hpp"
#include "wlpp/stats.hpp"

using namespace wlpp;
using nlohmann::json;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = config_from_json(json::parse(R"({"N": 3, "horizon": 4, "reps": 7, "seed": 9})"));
  CHECK(c.n == 3);
  CHECK(c.pi == std::vector<double>{1.0, 1.0, 1.0});
  CHECK(c.pihat.size() == 4);
  CHECK(c.grid == std::vector<std::size_t>{1, 2, 4});
  CHECK(c.mu == std::vector<double>{3.0, 2.0, 1.0});
  CHECK_NOTHROW(validate_config(c));

  CHECK_THROWS_AS(config_from_json(json::parse(R"({"bogus": 1})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"reps": -1})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"pi": "x"})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse("[1]")), ConfigError);

  const auto round = config_from_json(config_to_json(c));
  CHECK(config_to_json(round) == config_to_json(c));
}

TEST_CASE("config validation") {
  ExperimentConfig c;
  CHECK_NOTHROW(validate_config(c));
  auto bad = c;
  bad.grid = {1, 6};
  CHECK_THROWS_AS(validate_config(bad), ConfigError);
  bad = c;
  bad.grid = {2, 1};
  CHECK_THROWS_AS(validate_config(bad), ConfigError);
  bad = c;
  bad.pi = {1.0, 0.0};
  CHECK_THROWS_AS(validate_config(bad), ConfigError);
  bad = c;
  bad.pihat = {0.0};
  CHECK_THROWS_AS(validate_config(bad), ConfigError);
  bad = c;
  bad.kind = "gue";
  CHECK_THROWS_AS(validate_config(bad), ConfigError);
  bad = c;
  bad.alpha = 1.5;
  CHECK_THROWS_AS(validate_config(bad), ConfigError);
  bad = c;
  bad.scale = 0.5;
  CHECK_THROWS_AS(validate_config(bad), ConfigError);
}

TEST_CASE("sample files") {
  ExperimentConfig c;
  c.reps = 50;
  std::ostringstream a, b;
  write_samples(c, a);
  write_samples(c, b);
  CHECK(a.str() == b.str());
  const auto rows = lines(a.str());
  REQUIRE(rows.size() == 51);
  CHECK(rows[0] == "rep,t1,t2,t5");
  CHECK(rows[1].rfind("0,", 0) == 0);
  CHECK(rows[50].rfind("49,", 0) == 0);

  c.reps = 0;
  std::ostringstream empty;
  write_samples(c, empty);
  CHECK(empty.str() == "rep,t1,t2,t5\n");
}

TEST_CASE("sampled replicates do not depend on the replicate count") {
  ExperimentConfig c;
  c.kind = "lpp";
  c.reps = 10;
  std::ostringstream small, large;
  write_samples(c, small);
  c.reps = 5000;
  write_samples(c, large);
  const auto s = lines(small.str()), l = lines(large.str());
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i] == l[i]);
}

TEST_CASE("N=1 wishart samples are exponential") {
  ExperimentConfig c;
  c.n = 1;
  c.horizon = 1;
  c.grid = {1};
  c.pi = {1.2};
  c.pihat = {0.3};
  c.mu = {1.0};
  c.z = {1.0};
  c.reps = 20000;
  std::ostringstream out;
  write_samples(c, out);
  const auto rows = lines(out.str());
  std::vector<double> x;
  for (std::size_t i = 1; i < rows.size(); ++i) x.push_back(std::stod(rows[i].substr(rows[i].find(',') + 1)));
  CHECK(ks_one_sample(x, [](double t) { return 1.0 - std::exp(-1.5 * t); }, 0.01).passed());
}

TEST_CASE("verification report format") {
  ExperimentConfig c;
  c.suite = "identity";
  c.grid = {1, 3};
  c.reps = 10000;
  c.energy_reps = 0;
  const auto outcome = run_verification(c);
  CHECK(outcome.checks.size() == 2);
  CHECK(outcome.all_passed());
  const auto j = outcome.to_json(c);
  CHECK(j["suite"] == "identity");
  CHECK(j["version"] == kVersion);
  CHECK(j["config"]["seed"] == 1);
  CHECK(j["checks"].size() == 2);
  CHECK(j["checks"][0]["verdict"] == "pass");
  CHECK(config_from_json(j["config"]).grid == c.grid);
}

TEST_CASE("rsk suite reports exact zeros") {
  ExperimentConfig c;
  c.suite = "rsk";
  c.n = 4;
  c.horizon = 6;
  c.pi.assign(4, 1.0);
  c.pihat.assign(6, 0.0);
  c.mu = {4, 3, 2, 1};
  c.z = {4, 3, 2, 1};
  c.grid = {6};
  c.reps = 20000;
  const auto outcome = run_verification(c);
  CHECK(outcome.all_passed());
  for (const auto& r : outcome.checks) {
    if (r.test_name == "rsk.top_entry_equals_lpp" || r.test_name == "rsk.greene_exhaustive_3x3") {
      CHECK(r.statistic == 0.0);
    }
  }
}
