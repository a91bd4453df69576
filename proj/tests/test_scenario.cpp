#include "tflis/scenario.hpp"

#include <string>

#include "doctest.h"

using namespace tflis;

namespace {

// Minimal valid scalar config; individual tests mutate one field at a time.
std::string base_config() {
  return R"({
    "model": {
      "A": [[1.0]], "B": [[1.0]], "C": [[1.0]],
      "Q": [[0.1]], "R": [[0.5]]
    },
    "prior_mean": [0.0],
    "prior_cov_scale": 100.0,
    "sigma0": [0.0],
    "nu0": 0.0,
    "lag": 1,
    "ivb": 2,
    "horizon": 10,
    "runs": 3,
    "r_E_grid": [0.001, 1.0],
    "master_seed": 42,
    "methods": ["iKF", "TFLIS-F"]
  })";
}

std::string replaced(const std::string& from, const std::string& to) {
  std::string text = base_config();
  const std::size_t pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  text.replace(pos, from.size(), to);
  return text;
}

std::string failing_field(const std::string& json_text) {
  try {
    parse_scenario(json_text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "(no error)";
}

}  // namespace

TEST_CASE("a complete config parses into the expected values") {
  const ScenarioConfig cfg = parse_scenario(base_config());
  CHECK(cfg.model.state_dim() == 1);
  CHECK(cfg.prior_mean(0) == 0.0);
  CHECK(cfg.prior_cov(0, 0) == doctest::Approx(100.0));
  CHECK(cfg.sigma0(0) == 0.0);
  CHECK(cfg.nu0 == 0.0);
  CHECK(cfg.lag == 1);
  CHECK(cfg.ivb == 2);
  CHECK(cfg.horizon == 10);
  CHECK(cfg.runs == 3);
  REQUIRE(cfg.r_e_grid.size() == 2);
  CHECK(cfg.r_e_grid[0] == doctest::Approx(0.001));
  CHECK(cfg.master_seed == 42);
  CHECK(cfg.wants(Method::kIsolatedKf));
  CHECK(cfg.wants(Method::kTransferFilter));
  CHECK_FALSE(cfg.wants(Method::kExactKf));
  CHECK_FALSE(cfg.wants(Method::kTransferSmoother));
  const GaussianStats prior = cfg.prior();
  CHECK(prior.mean.size() == 1);
  CHECK(prior.cov(0, 0) == doctest::Approx(100.0));
}

TEST_CASE("the bundled configs load") {
  const std::string root = TFLIS_SOURCE_DIR;

  const ScenarioConfig paper = load_scenario(root + "/configs/paper.json");
  CHECK(paper.model.state_dim() == 2);
  CHECK(paper.model.A(0, 1) == 1.0);
  CHECK(paper.model.Q(1, 1) == doctest::Approx(1e-4));
  CHECK(paper.prior_cov(0, 0) == doctest::Approx(1e7));
  CHECK(paper.lag == 2);
  CHECK(paper.ivb == 10);
  CHECK(paper.horizon == 50);
  CHECK(paper.runs == 10000);
  CHECK(paper.r_e_grid.size() == 7);
  for (int i = 0; i < kMethodCount; ++i) {
    CHECK(paper.wants(static_cast<Method>(i)));
  }

  const ScenarioConfig quick = load_scenario(root + "/configs/quick.json");
  CHECK(quick.model.state_dim() == 2);
  CHECK(quick.runs < paper.runs);

  CHECK_THROWS_AS(load_scenario(root + "/configs/nope.json"), ConfigError);
}

TEST_CASE("errors name the offending field") {
  CHECK(failing_field("not json at all") == "(root)");
  CHECK(failing_field("{}") == "model");
  CHECK(failing_field(R"({"model": {}})") == "model.A");

  // Structurally broken model entries.
  CHECK(failing_field(replaced("\"A\": [[1.0]]", "\"A\": [[1.0, 2.0]]")) ==
        "model");
  CHECK(failing_field(replaced("\"A\": [[1.0]]", "\"A\": [[\"x\"]]")) ==
        "model.A");
  CHECK(failing_field(replaced("\"R\": [[0.5]]", "\"R\": [[-0.5]]")) ==
        "model");

  // Field-level validation.
  CHECK(failing_field(replaced("\"prior_mean\": [0.0]",
                               "\"prior_mean\": [0.0, 0.0]")) == "prior_mean");
  CHECK(failing_field(replaced("\"prior_cov_scale\": 100.0",
                               "\"prior_cov_scale\": 0.0")) ==
        "prior_cov_scale");
  CHECK(failing_field(replaced("\"prior_cov_scale\": 100.0",
                               "\"prior_cov_scale\": [[1.0, 0.0]]")) ==
        "prior_cov_scale");
  CHECK(failing_field(replaced("\"sigma0\": [0.0]", "\"sigma0\": [-1.0]")) ==
        "sigma0");
  CHECK(failing_field(replaced("\"nu0\": 0.0", "\"nu0\": -1.0")) == "nu0");
  CHECK(failing_field(replaced("\"lag\": 1", "\"lag\": -1")) == "lag");
  CHECK(failing_field(replaced("\"ivb\": 2", "\"ivb\": -3")) == "ivb");
  CHECK(failing_field(replaced("\"horizon\": 10", "\"horizon\": 1")) ==
        "horizon");
  CHECK(failing_field(replaced("\"runs\": 3", "\"runs\": 0")) == "runs");
  CHECK(failing_field(replaced("\"r_E_grid\": [0.001, 1.0]",
                               "\"r_E_grid\": [0.001, 0.0]")) == "r_E_grid");
  CHECK(failing_field(replaced("\"r_E_grid\": [0.001, 1.0]",
                               "\"r_E_grid\": []")) == "r_E_grid");
  CHECK(failing_field(replaced("\"master_seed\": 42",
                               "\"master_seed\": -1")) == "master_seed");
  CHECK(failing_field(replaced("\"master_seed\": 42",
                               "\"master_seed\": 1.5")) == "master_seed");
  CHECK(failing_field(replaced("\"methods\": [\"iKF\", \"TFLIS-F\"]",
                               "\"methods\": [\"bogus\"]")) == "methods");
  CHECK(failing_field(replaced("\"methods\": [\"iKF\", \"TFLIS-F\"]",
                               "\"methods\": []")) == "methods");

  // Missing fields are reported by name.
  CHECK(failing_field(replaced("\"runs\": 3,", "")) == "runs");
  CHECK(failing_field(replaced("\"lag\": 1,", "")) == "lag");
}

TEST_CASE("prior covariance may be given as a full matrix") {
  const std::string text = replaced("\"prior_cov_scale\": 100.0",
                                    "\"prior_cov_scale\": [[2.0]]");
  const ScenarioConfig cfg = parse_scenario(text);
  CHECK(cfg.prior_cov(0, 0) == doctest::Approx(2.0));
}

TEST_CASE("method names round-trip") {
  CHECK(std::string(method_name(Method::kIsolatedKf)) == "iKF");
  CHECK(std::string(method_name(Method::kIsolatedFls)) == "iFLS");
  CHECK(std::string(method_name(Method::kExactKf)) == "KF");
  CHECK(std::string(method_name(Method::kExactFls)) == "FLS");
  CHECK(std::string(method_name(Method::kTransferFilter)) == "TFLIS-F");
  CHECK(std::string(method_name(Method::kTransferSmoother)) == "TFLIS-S");
}
