#pragma once

#include <vector>

#include "tflis/model.hpp"

namespace tflis {

/// Squared Euclidean estimation error ||truth - estimate||^2.
double squared_error(const Vector& truth, const Vector& estimate);

/// Mean of the first (horizon - lag) per-step squared errors. The series
/// must hold at least that many entries; the trailing lag steps of a run
/// have no smoothed estimate and are never scored.
double mean_squared_error(const std::vector<double>& se_series, int lag,
                          int horizon);

/// Sample mean and standard error (sample standard deviation / sqrt(n),
/// zero for a single value) over per-run scores.
struct RunAggregate {
  double mean = 0.0;
  double standard_error = 0.0;
};

RunAggregate aggregate_runs(const std::vector<double>& values);

}  // namespace tflis
