#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tflis/model.hpp"

namespace tflis {

/// Estimators the experiment harness can score. The order here fixes the
/// CSV column order.
enum class Method {
  kIsolatedKf,      // "iKF"   Kalman filter, target stream only
  kIsolatedFls,     // "iFLS"  fixed-lag smoother, target stream only
  kExactKf,         // "KF"    Kalman filter, both streams, known variance
  kExactFls,        // "FLS"   fixed-lag smoother, both streams
  kTransferFilter,  // "TFLIS-F" transfer smoother, filtered estimates
  kTransferSmoother,  // "TFLIS-S" transfer smoother, smoothed estimates
};

inline constexpr int kMethodCount = 6;

const char* method_name(Method m);

/// Config validation failure carrying the offending field name.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error("field '" + field + "': " + message),
        field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Fully validated experiment description.
struct ScenarioConfig {
  StateSpaceModel model;
  Vector prior_mean;
  Matrix prior_cov;
  Vector sigma0;  // diagonal scale prior entries
  double nu0 = 0.0;
  int lag = 0;
  int ivb = 0;  // variational sweeps per step
  int horizon = 0;
  int runs = 0;
  std::vector<double> r_e_grid;
  std::uint64_t master_seed = 0;
  std::array<bool, kMethodCount> methods{};

  bool wants(Method m) const { return methods[static_cast<int>(m)]; }
  GaussianStats prior() const { return {prior_mean, prior_cov}; }
};

/// Parses and validates a config from JSON text / a JSON file. Throws
/// ConfigError naming the offending field on any problem.
ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario(const std::string& path);

}  // namespace tflis
