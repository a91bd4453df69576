#pragma once

#include <optional>

#include "tflis/model.hpp"

namespace tflis {

/// Fixed-lag interval smoother: maintains the joint normal belief over the
/// window of the most recent states
///
///   X_k = [x_k', x_{k-1}', ..., x_{max(k-lag,1)}']'
///
/// newest block first. Each step is a scalar-sequential observation update
/// followed by a window shift; the shift appends the predicted state in
/// front and, once the window is saturated, marginalizes the oldest block.
/// With lag 0 this is exactly a Kalman filter; the last window block of the
/// posterior at time k+lag is the fixed-lag smoothed state for time k.
class Flis {
 public:
  /// Starts at time 1 with the given belief over x_1 (window size 1).
  Flis(StateSpaceModel model, GaussianStats prior, int lag);

  /// Conditions the window belief on the observation of the newest state
  /// with the model's own noise covariance.
  void data_step(const Vector& y);

  /// Conditions on an additional observation of the newest state with
  /// isotropic noise of the given variance. Used by estimators that treat
  /// a second observation stream as exactly modeled.
  void external_data_step(const Vector& y, double variance);

  /// Shifts the window one step forward under input u and advances time.
  void time_step(const Vector& u);

  const GaussianStats& belief() const { return belief_; }
  const StateSpaceModel& model() const { return model_; }
  int time() const { return k_; }
  int lag() const { return lag_; }
  int window_size() const { return std::min(k_, lag_ + 1); }
  int carried() const { return std::min(k_, lag_); }

 private:
  StateSpaceModel model_;
  GaussianStats belief_;
  int lag_;
  int k_ = 1;
};

/// Newest window block of an augmented belief mean: the filtered estimate
/// of the current state.
Vector filtered_estimate(const GaussianStats& belief, int state_dim);

/// Oldest block of a saturated window (block lag+1): the smoothed estimate
/// of the state `lag` steps back. Empty until the window has grown to full
/// size, i.e. until time >= lag+1.
std::optional<Vector> smoothed_estimate(const GaussianStats& belief,
                                        int state_dim, int lag);

/// Baseline estimator variants scored in the experiments. Isolated kinds
/// see only the target stream; exact kinds also absorb the external stream
/// with its true noise variance. Filter kinds require lag 0.
enum class BaselineKind {
  kIsolatedFilter,    // Kalman filter, target stream only
  kIsolatedSmoother,  // fixed-lag smoother, target stream only
  kExactFilter,       // Kalman filter, both streams, known external noise
  kExactSmoother,     // fixed-lag smoother, both streams
};

/// One full estimator step: target update, external update where the kind
/// asks for one, then the window shift. Returns the post-update belief
/// (the quantity the metrics read). y_external / external_variance may be
/// null only for the isolated kinds.
GaussianStats baseline_step(BaselineKind kind, Flis& estimator, const Vector& u,
                            const Vector& y_target, const Vector* y_external,
                            const double* external_variance);

}  // namespace tflis
