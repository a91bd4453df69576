#include "tflis/scenario.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace tflis {

namespace {

using nlohmann::json;

const json& require_field(const json& j, const std::string& name) {
  if (!j.contains(name)) {
    throw ConfigError(name, "missing");
  }
  return j.at(name);
}

Matrix parse_matrix(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty() || !j.front().is_array()) {
    throw ConfigError(field, "expected a non-empty array of rows");
  }
  const std::size_t rows = j.size();
  const std::size_t cols = j.front().size();
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const json& row = j.at(i);
    if (!row.is_array() || row.size() != cols) {
      throw ConfigError(field, "rows must all have the same length");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!row.at(c).is_number()) {
        throw ConfigError(field, "entries must be numbers");
      }
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
          row.at(c).get<double>();
    }
  }
  return m;
}

Vector parse_vector(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError(field, "expected a non-empty array of numbers");
  }
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j.at(i).is_number()) {
      throw ConfigError(field, "entries must be numbers");
    }
    v(static_cast<Eigen::Index>(i)) = j.at(i).get<double>();
  }
  return v;
}

int parse_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) {
    throw ConfigError(field, "expected an integer");
  }
  return j.get<int>();
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::kIsolatedKf:
      return "iKF";
    case Method::kIsolatedFls:
      return "iFLS";
    case Method::kExactKf:
      return "KF";
    case Method::kExactFls:
      return "FLS";
    case Method::kTransferFilter:
      return "TFLIS-F";
    case Method::kTransferSmoother:
      return "TFLIS-S";
  }
  return "?";
}

ScenarioConfig parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("(root)", std::string("not valid JSON: ") + e.what());
  }

  ScenarioConfig cfg;

  const json& jm = require_field(j, "model");
  auto model_field = [&jm](const char* key) -> const json& {
    if (!jm.contains(key)) {
      throw ConfigError(std::string("model.") + key, "missing");
    }
    return jm.at(key);
  };
  Matrix a = parse_matrix(model_field("A"), "model.A");
  Matrix b = parse_matrix(model_field("B"), "model.B");
  Matrix c = parse_matrix(model_field("C"), "model.C");
  Matrix q = parse_matrix(model_field("Q"), "model.Q");
  Matrix r = parse_matrix(model_field("R"), "model.R");
  try {
    cfg.model = StateSpaceModel(std::move(a), std::move(b), std::move(c),
                                std::move(q), std::move(r));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("model", e.what());
  }

  cfg.prior_mean = parse_vector(require_field(j, "prior_mean"), "prior_mean");
  if (cfg.prior_mean.size() != cfg.model.state_dim()) {
    throw ConfigError("prior_mean", "length must equal the state dimension");
  }

  const json& jp = require_field(j, "prior_cov_scale");
  if (jp.is_number()) {
    const double scale = jp.get<double>();
    if (!(scale > 0.0)) {
      throw ConfigError("prior_cov_scale", "must be positive");
    }
    cfg.prior_cov =
        scale * Matrix::Identity(cfg.model.state_dim(), cfg.model.state_dim());
  } else {
    cfg.prior_cov = parse_matrix(jp, "prior_cov_scale");
    if (cfg.prior_cov.rows() != cfg.model.state_dim() ||
        !is_valid_covariance(cfg.prior_cov)) {
      throw ConfigError("prior_cov_scale",
                        "matrix form must be a valid state covariance");
    }
  }

  cfg.sigma0 = parse_vector(require_field(j, "sigma0"), "sigma0");
  if (cfg.sigma0.size() != cfg.model.output_dim()) {
    throw ConfigError("sigma0", "length must equal the observation dimension");
  }
  if (cfg.sigma0.minCoeff() < 0.0) {
    throw ConfigError("sigma0", "entries must be >= 0");
  }

  const json& jnu = require_field(j, "nu0");
  if (!jnu.is_number()) {
    throw ConfigError("nu0", "expected a number");
  }
  cfg.nu0 = jnu.get<double>();
  if (cfg.nu0 < 0.0) {
    throw ConfigError("nu0", "must be >= 0");
  }

  cfg.lag = parse_int(require_field(j, "lag"), "lag");
  if (cfg.lag < 0) {
    throw ConfigError("lag", "must be >= 0");
  }
  cfg.ivb = parse_int(require_field(j, "ivb"), "ivb");
  if (cfg.ivb < 0) {
    throw ConfigError("ivb", "must be >= 0");
  }
  cfg.horizon = parse_int(require_field(j, "horizon"), "horizon");
  if (cfg.horizon <= cfg.lag) {
    throw ConfigError("horizon", "must exceed the lag");
  }
  cfg.runs = parse_int(require_field(j, "runs"), "runs");
  if (cfg.runs < 1) {
    throw ConfigError("runs", "must be >= 1");
  }

  const json& jg = require_field(j, "r_E_grid");
  if (!jg.is_array() || jg.empty()) {
    throw ConfigError("r_E_grid", "expected a non-empty array");
  }
  for (const json& v : jg) {
    if (!v.is_number() || !(v.get<double>() > 0.0)) {
      throw ConfigError("r_E_grid", "entries must be positive numbers");
    }
    cfg.r_e_grid.push_back(v.get<double>());
  }

  const json& js = require_field(j, "master_seed");
  if (!js.is_number_integer() ||
      (!js.is_number_unsigned() && js.get<std::int64_t>() < 0)) {
    throw ConfigError("master_seed", "expected a non-negative integer");
  }
  cfg.master_seed = js.get<std::uint64_t>();

  const json& jmethods = require_field(j, "methods");
  if (!jmethods.is_array() || jmethods.empty()) {
    throw ConfigError("methods", "expected a non-empty array of method names");
  }
  for (const json& v : jmethods) {
    if (!v.is_string()) {
      throw ConfigError("methods", "entries must be strings");
    }
    const std::string name = v.get<std::string>();
    bool known = false;
    for (int i = 0; i < kMethodCount; ++i) {
      if (name == method_name(static_cast<Method>(i))) {
        cfg.methods[i] = true;
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError("methods", "unknown method '" + name + "'");
    }
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("(file)", "cannot open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace tflis
