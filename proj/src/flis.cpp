#include "tflis/flis.hpp"

#include <stdexcept>

#include "tflis/sdu.hpp"

namespace tflis {

Flis::Flis(StateSpaceModel model, GaussianStats prior, int lag)
    : model_(std::move(model)), belief_(std::move(prior)), lag_(lag) {
  if (lag_ < 0) {
    throw std::invalid_argument("lag must be >= 0");
  }
  const Eigen::Index n = model_.state_dim();
  if (belief_.mean.size() != n || belief_.cov.rows() != n ||
      belief_.cov.cols() != n) {
    throw std::invalid_argument("prior belief must cover a single state");
  }
  if (!all_finite(belief_.mean) || !is_valid_covariance(belief_.cov)) {
    throw std::invalid_argument("prior belief is not a valid normal");
  }
}

void Flis::data_step(const Vector& y) {
  if (y.size() != model_.output_dim() || !all_finite(y)) {
    throw std::invalid_argument("observation has wrong length or is non-finite");
  }
  const Matrix sel = window_output_selector(window_size(), 1, model_.C);
  belief_ = sequential_data_update(belief_, sel, model_.observation_variances(),
                                   y);
}

void Flis::external_data_step(const Vector& y, double variance) {
  if (y.size() != model_.output_dim() || !all_finite(y)) {
    throw std::invalid_argument("observation has wrong length or is non-finite");
  }
  if (!(variance > 0.0)) {
    throw std::invalid_argument("external noise variance must be positive");
  }
  const Matrix sel = window_output_selector(window_size(), 1, model_.C);
  const Vector gamma = Vector::Constant(model_.output_dim(), variance);
  belief_ = sequential_data_update(belief_, sel, gamma, y);
}

void Flis::time_step(const Vector& u) {
  if (u.size() != model_.input_dim() || !all_finite(u)) {
    throw std::invalid_argument("input has wrong length or is non-finite");
  }
  const WindowTransition t =
      window_transition(window_size(), carried(), model_.A, model_.B, model_.Q);
  GaussianStats next;
  next.mean = t.state * belief_.mean + t.input * u;
  next.cov = symmetrized(t.state * belief_.cov * t.state.transpose() + t.noise);
  debug_check_covariance(next.cov);
  belief_ = std::move(next);
  ++k_;
}

Vector filtered_estimate(const GaussianStats& belief, int state_dim) {
  if (state_dim < 1 || belief.mean.size() < state_dim) {
    throw std::invalid_argument("belief smaller than one state block");
  }
  return belief.mean.head(state_dim);
}

std::optional<Vector> smoothed_estimate(const GaussianStats& belief,
                                        int state_dim, int lag) {
  if (state_dim < 1 || lag < 0) {
    throw std::invalid_argument("invalid state dimension or lag");
  }
  const Eigen::Index full = static_cast<Eigen::Index>(lag + 1) * state_dim;
  if (belief.mean.size() < full) {
    return std::nullopt;
  }
  return Vector(belief.mean.segment(static_cast<Eigen::Index>(lag) * state_dim,
                                    state_dim));
}

GaussianStats baseline_step(BaselineKind kind, Flis& estimator, const Vector& u,
                            const Vector& y_target, const Vector* y_external,
                            const double* external_variance) {
  const bool filter_kind = kind == BaselineKind::kIsolatedFilter ||
                           kind == BaselineKind::kExactFilter;
  const bool exact_kind = kind == BaselineKind::kExactFilter ||
                          kind == BaselineKind::kExactSmoother;
  if (filter_kind && estimator.lag() != 0) {
    throw std::invalid_argument("filter baselines require lag 0");
  }
  if (exact_kind && (y_external == nullptr || external_variance == nullptr)) {
    throw std::invalid_argument(
        "exact baselines need the external observation and its variance");
  }
  estimator.data_step(y_target);
  if (exact_kind) {
    estimator.external_data_step(*y_external, *external_variance);
  }
  GaussianStats posterior = estimator.belief();
  estimator.time_step(u);
  return posterior;
}

}  // namespace tflis
