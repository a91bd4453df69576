#pragma once

#include <string>
#include <vector>

#include "tflis/model.hpp"

namespace tflis {

/// Second-order benchmark system used by the built-in checks and the
/// bundled configs: position/velocity kinematics with a scalar input,
/// both state components observed directly.
StateSpaceModel tracking_model();

/// Vague prior over the tracking model state: zero mean, 1e7 * I.
GaussianStats vague_tracking_prior();

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Built-in cross-validation suite, runnable without any scenario file:
///   - scalar sequential updates against the batch information-form
///     posterior on randomized instances,
///   - the window belief against the from-first-principles batch solve,
///   - lag-0 / transfer-off degeneration to a conventional Kalman filter,
///   - shift-register period and balance,
///   - the bookkeeping identities of the noise-inflation statistics.
std::vector<CheckResult> run_verification_suite();

}  // namespace tflis
