#include "tflis/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace tflis {

double squared_error(const Vector& truth, const Vector& estimate) {
  if (truth.size() != estimate.size()) {
    throw std::invalid_argument("truth and estimate lengths differ");
  }
  return (truth - estimate).squaredNorm();
}

double mean_squared_error(const std::vector<double>& se_series, int lag,
                          int horizon) {
  if (lag < 0 || horizon <= lag) {
    throw std::invalid_argument("horizon must exceed the lag");
  }
  const std::size_t scored = static_cast<std::size_t>(horizon - lag);
  if (se_series.size() < scored) {
    throw std::invalid_argument("squared-error series shorter than scored range");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < scored; ++i) {
    sum += se_series[i];
  }
  return sum / static_cast<double>(scored);
}

RunAggregate aggregate_runs(const std::vector<double>& values) {
  if (values.empty()) {
    throw std::invalid_argument("no values to aggregate");
  }
  RunAggregate out;
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  const double n = static_cast<double>(values.size());
  out.mean = sum / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) {
      ss += (v - out.mean) * (v - out.mean);
    }
    out.standard_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return out;
}

}  // namespace tflis
