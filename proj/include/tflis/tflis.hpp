#pragma once

#include <deque>
#include <vector>

#include "tflis/model.hpp"

namespace tflis {

/// One term of the scale accumulation: adds to `sigma_prev` the elementwise
/// ratio of the expected squared residual of the external observation to
/// the model observation variances,
///
///   sigma + (1/r) o [ (y_e - sel x)^2 + diag(sel P sel') ]
///
/// where o is the elementwise product over observation entries. Only the
/// diagonal of sel P sel' is formed.
Vector sigma_accumulate(const Vector& sigma_prev, const Vector& y_external,
                        const Matrix& selector, const Vector& mean,
                        const Matrix& cov, const Vector& r_diag);

/// Mean of the inverse-Wishart scale estimate after absorbing a window of
/// `window` external observations on top of `nu_base` degrees of freedom:
/// sigma / (nu_base + window). Throws if the divisor is not positive.
Vector xi_mean(const Vector& sigma, double nu_base, int window);

/// Fixed-lag interval smoother that transfers knowledge from an external
/// observation stream of unknown precision. The external stream is modeled
/// as the target observation process with its noise covariance inflated by
/// an unknown diagonal factor; that factor carries an inverse-Wishart
/// belief which is refined jointly with the state window by a fixed number
/// of variational coordinate sweeps per step.
///
/// Each step:
///   1. updates the window belief with the target observation,
///   2. alternates, for a fixed iteration count, between re-estimating the
///      noise-inflation statistics over the whole window and re-running the
///      window observation updates of the external stream under the current
///      inflation estimate,
///   3. propagates forward only the statistics conditioned on the oldest
///      window element of the external stream, so each external observation
///      is absorbed permanently exactly once, after its full window of
///      re-estimation passes.
///
/// The reported belief of a step is the final sweep's full-window update;
/// the estimates it carries gracefully degrade to the target-only smoother
/// when the external stream turns out to be uninformative.
class Tflis {
 public:
  /// `prior` is over x_1 alone; `scale_prior` seeds the noise-inflation
  /// belief (diagonal scale, one entry per observation row). `ivb_sweeps`
  /// fixes the per-step iteration count; 0 disables the transfer entirely.
  Tflis(StateSpaceModel model, GaussianStats prior, WishartStats scale_prior,
        int lag, int ivb_sweeps);

  /// Per-step internals, filled on request. sigma_chains[j][i] is the scale
  /// accumulation after the (i+1)-th window element in sweep j+1; x_chain
  /// diagnostics refer to the final sweep.
  struct StepDiagnostics {
    GaussianStats post_target;  // belief right after the target update
    std::vector<std::vector<Vector>> sigma_chains;
    double xi_divisor = 0.0;
  };

  struct StepResult {
    GaussianStats reported;        // full-window posterior of the final sweep
    GaussianStats predicted;       // belief handed to the next step
    WishartStats committed_scale;  // inflation statistics handed forward
    Vector xi_bar;                 // final inflation estimate (diagonal)
  };

  StepResult step(const Vector& u, const Vector& y_target,
                  const Vector& y_external,
                  StepDiagnostics* diagnostics = nullptr);

  const StateSpaceModel& model() const { return model_; }
  const GaussianStats& predicted_belief() const { return belief_; }
  const WishartStats& committed_scale() const { return scale_; }
  int time() const { return k_; }
  int lag() const { return lag_; }
  int window_size() const { return std::min(k_, lag_ + 1); }
  int ivb_sweeps() const { return sweeps_; }

 private:
  StateSpaceModel model_;
  GaussianStats belief_;  // predicted belief for time k_
  WishartStats scale_;
  std::deque<Vector> external_window_;  // oldest first, newest appended in step
  int lag_;
  int sweeps_;
  int k_ = 1;
};

}  // namespace tflis
