#pragma once

#include <vector>

#include "tflis/model.hpp"

namespace tflis {

/// Reference implementations kept deliberately independent of the scalar
/// sequential update path: they assemble full information matrices or
/// matrix gains and invert them explicitly. Used by the self-check suite
/// and the tests to cross-validate the recursions.

/// Batch Gaussian posterior in information form,
///   S = (S0^-1 + H' G^-1 H)^-1,  mu = S (S0^-1 mu0 + H' G^-1 z),
/// with G = diag(gamma). Requires an invertible prior covariance.
GaussianStats batch_posterior(const GaussianStats& prior, const Matrix& H,
                              const Vector& gamma, const Vector& z);

/// Conventional Kalman filter with matrix gain K = P C' (C P C' + R)^-1
/// and the stabilized quadratic covariance update.
class ReferenceKalmanFilter {
 public:
  ReferenceKalmanFilter(StateSpaceModel model, GaussianStats prior);

  void update(const Vector& y);  // model observation matrix and noise
  void update(const Vector& y, const Matrix& C_obs, const Matrix& R_obs);
  void predict(const Vector& u);

  const GaussianStats& belief() const { return belief_; }

 private:
  StateSpaceModel model_;
  GaussianStats belief_;
};

/// One observation of the state at a given time inside a batch solve.
struct BatchObservation {
  int time = 1;  // 1-based step index
  Matrix H;      // rows x state_dim, applied to x_time
  Vector gamma;  // observation noise variances (diagonal)
  Vector z;
};

/// Joint posterior over the newest `window` states from first principles:
/// the trajectory is reparametrized over the initial state and the
/// per-step process noise coordinates (so a singular Q costs nothing), the
/// full information matrix over those free variables is assembled from the
/// prior and all observations, solved by explicit inversion, and mapped to
/// the window [x_k', ..., x_{k-window+1}']'. `inputs` holds u_1..u_{k-1},
/// fixing k = inputs.size() + 1.
GaussianStats batch_window_posterior(
    const StateSpaceModel& model, const GaussianStats& prior,
    const std::vector<Vector>& inputs,
    const std::vector<BatchObservation>& observations, int window);

}  // namespace tflis
