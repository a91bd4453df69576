#include "tflis/tflis.hpp"

#include <stdexcept>

#include "tflis/sdu.hpp"

namespace tflis {

Vector sigma_accumulate(const Vector& sigma_prev, const Vector& y_external,
                        const Matrix& selector, const Vector& mean,
                        const Matrix& cov, const Vector& r_diag) {
  const Eigen::Index p = sigma_prev.size();
  if (y_external.size() != p || selector.rows() != p || r_diag.size() != p) {
    throw std::invalid_argument("observation row counts do not match");
  }
  if (selector.cols() != mean.size() || cov.rows() != mean.size() ||
      cov.cols() != mean.size()) {
    throw std::invalid_argument("selector width does not match belief");
  }
  const Vector residual = y_external - selector * mean;
  const Matrix sp = selector * cov;
  Vector out(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    if (!(r_diag(i) > 0.0)) {
      throw std::invalid_argument("observation variances must be positive");
    }
    const double spread = sp.row(i).dot(selector.row(i));
    out(i) = sigma_prev(i) + (residual(i) * residual(i) + spread) / r_diag(i);
  }
  return out;
}

Vector xi_mean(const Vector& sigma, double nu_base, int window) {
  const double divisor = nu_base + window;
  if (!(divisor > 0.0)) {
    throw std::invalid_argument("degrees of freedom plus window must be > 0");
  }
  return sigma / divisor;
}

Tflis::Tflis(StateSpaceModel model, GaussianStats prior,
             WishartStats scale_prior, int lag, int ivb_sweeps)
    : model_(std::move(model)),
      belief_(std::move(prior)),
      scale_(std::move(scale_prior)),
      lag_(lag),
      sweeps_(ivb_sweeps) {
  if (lag_ < 0) {
    throw std::invalid_argument("lag must be >= 0");
  }
  if (sweeps_ < 0) {
    throw std::invalid_argument("sweep count must be >= 0");
  }
  const Eigen::Index n = model_.state_dim();
  if (belief_.mean.size() != n || belief_.cov.rows() != n ||
      belief_.cov.cols() != n) {
    throw std::invalid_argument("prior belief must cover a single state");
  }
  if (!all_finite(belief_.mean) || !is_valid_covariance(belief_.cov)) {
    throw std::invalid_argument("prior belief is not a valid normal");
  }
  if (scale_.sigma.size() != model_.output_dim()) {
    throw std::invalid_argument(
        "scale prior must have one entry per observation row");
  }
}

Tflis::StepResult Tflis::step(const Vector& u, const Vector& y_target,
                              const Vector& y_external,
                              StepDiagnostics* diagnostics) {
  if (u.size() != model_.input_dim() ||
      y_target.size() != model_.output_dim() ||
      y_external.size() != model_.output_dim()) {
    throw std::invalid_argument("step input lengths do not match the model");
  }
  if (!all_finite(u) || !all_finite(y_target) || !all_finite(y_external)) {
    throw std::invalid_argument("step inputs must be finite");
  }

  const int w = window_size();
  const int carried = std::min(k_, lag_);
  const bool saturated = k_ > lag_;
  const Vector r_diag = model_.observation_variances();
  const Eigen::Index p = model_.output_dim();

  external_window_.push_back(y_external);  // window now spans q = k-w+1 .. k

  // Selectors for the window elements, oldest (block w) to newest (block 1).
  std::vector<Matrix> selectors;
  selectors.reserve(w);
  for (int i = 0; i < w; ++i) {
    selectors.push_back(window_output_selector(w, w - i, model_.C));
  }

  // Target observation update.
  const GaussianStats post_target =
      sequential_data_update(belief_, selectors.back(), r_diag, y_target);
  if (diagnostics) {
    diagnostics->post_target = post_target;
    diagnostics->sigma_chains.clear();
    diagnostics->xi_divisor = scale_.nu + w;
  }

  // Variational sweeps. Each sweep recomputes the scale accumulation over
  // the window from the previous sweep's full-window posterior, then replays
  // the external updates from the post-target belief under the refreshed
  // inflation estimate.
  GaussianStats full = post_target;   // full-window posterior, latest sweep
  GaussianStats first = post_target;  // posterior after the oldest element only
  Vector sigma_first = scale_.sigma;
  Vector xi = xi_mean(scale_.sigma, scale_.nu, w);
  for (int sweep = 1; sweep <= sweeps_; ++sweep) {
    Vector sigma = scale_.sigma;
    if (diagnostics) {
      diagnostics->sigma_chains.emplace_back();
    }
    for (int i = 0; i < w; ++i) {
      sigma = sigma_accumulate(sigma, external_window_[i], selectors[i],
                               full.mean, full.cov, r_diag);
      if (i == 0) {
        sigma_first = sigma;
      }
      if (diagnostics) {
        diagnostics->sigma_chains.back().push_back(sigma);
      }
    }
    xi = xi_mean(sigma, scale_.nu, w);

    Vector gamma(p);
    for (Eigen::Index i = 0; i < p; ++i) {
      gamma(i) = std::max(r_diag(i) * xi(i), 1e-12 * r_diag(i));
    }
    GaussianStats chain = post_target;
    for (int i = 0; i < w; ++i) {
      chain =
          sequential_data_update(chain, selectors[i], gamma, external_window_[i]);
      if (i == 0) {
        first = chain;
      }
    }
    full = chain;
  }

  StepResult result;
  result.reported = full;
  result.xi_bar = xi;

  // Only the statistics conditioned on the oldest window element move
  // forward; newer external observations are re-estimated next step.
  const GaussianStats& committed = saturated ? first : post_target;
  if (saturated) {
    scale_.sigma = sigma_first;
    scale_.nu += 1.0;
  }
  result.committed_scale = scale_;

  const WindowTransition t =
      window_transition(w, carried, model_.A, model_.B, model_.Q);
  result.predicted.mean = t.state * committed.mean + t.input * u;
  result.predicted.cov =
      symmetrized(t.state * committed.cov * t.state.transpose() + t.noise);
  debug_check_covariance(result.predicted.cov);

  belief_ = result.predicted;
  ++k_;
  if (static_cast<int>(external_window_.size()) > lag_) {
    external_window_.pop_front();
  }
  return result;
}

}  // namespace tflis
