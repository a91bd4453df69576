#include "tflis/oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace tflis {

GaussianStats batch_posterior(const GaussianStats& prior, const Matrix& H,
                              const Vector& gamma, const Vector& z) {
  const Eigen::Index n = prior.mean.size();
  if (H.cols() != n || H.rows() != gamma.size() || z.size() != gamma.size()) {
    throw std::invalid_argument("batch posterior shape mismatch");
  }
  const Matrix prior_info = prior.cov.inverse();
  Matrix info = prior_info;
  Vector info_vec = prior_info * prior.mean;
  for (Eigen::Index i = 0; i < H.rows(); ++i) {
    if (std::isinf(gamma(i))) {
      continue;  // flat likelihood rows carry no information
    }
    if (!(gamma(i) > 0.0)) {
      throw std::invalid_argument("observation variances must be positive");
    }
    info.noalias() += H.row(i).transpose() * H.row(i) / gamma(i);
    info_vec.noalias() += H.row(i).transpose() * (z(i) / gamma(i));
  }
  GaussianStats post;
  post.cov = symmetrized(info.inverse());
  post.mean = post.cov * info_vec;
  return post;
}

ReferenceKalmanFilter::ReferenceKalmanFilter(StateSpaceModel model,
                                             GaussianStats prior)
    : model_(std::move(model)), belief_(std::move(prior)) {
  if (belief_.mean.size() != model_.state_dim()) {
    throw std::invalid_argument("prior does not match the state dimension");
  }
}

void ReferenceKalmanFilter::update(const Vector& y) {
  update(y, model_.C, model_.R);
}

void ReferenceKalmanFilter::update(const Vector& y, const Matrix& C_obs,
                                   const Matrix& R_obs) {
  const Eigen::Index n = belief_.mean.size();
  const Matrix innovation_cov =
      C_obs * belief_.cov * C_obs.transpose() + R_obs;
  const Matrix gain =
      belief_.cov * C_obs.transpose() * innovation_cov.inverse();
  belief_.mean += gain * (y - C_obs * belief_.mean);
  const Matrix closed = Matrix::Identity(n, n) - gain * C_obs;
  belief_.cov = symmetrized(closed * belief_.cov * closed.transpose() +
                            gain * R_obs * gain.transpose());
}

void ReferenceKalmanFilter::predict(const Vector& u) {
  belief_.mean = model_.A * belief_.mean + model_.B * u;
  belief_.cov =
      symmetrized(model_.A * belief_.cov * model_.A.transpose() + model_.Q);
}

GaussianStats batch_window_posterior(
    const StateSpaceModel& model, const GaussianStats& prior,
    const std::vector<Vector>& inputs,
    const std::vector<BatchObservation>& observations, int window) {
  const Eigen::Index n = model.state_dim();
  const int k = static_cast<int>(inputs.size()) + 1;
  if (window < 1 || window > k) {
    throw std::invalid_argument("window must lie in 1..k");
  }

  // Noise coordinates: Q = G G' with G spanning only the nonzero
  // eigendirections, so singular process noise stays exact.
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrized(model.Q));
  const double lambda_max = eig.eigenvalues().size() > 0
                                ? eig.eigenvalues().cwiseAbs().maxCoeff()
                                : 0.0;
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (eig.eigenvalues()(i) > 1e-12 * lambda_max && eig.eigenvalues()(i) > 0) {
      kept.push_back(i);
    }
  }
  const Eigen::Index r = static_cast<Eigen::Index>(kept.size());
  Matrix G(n, r);
  for (Eigen::Index j = 0; j < r; ++j) {
    G.col(j) =
        eig.eigenvectors().col(kept[j]) * std::sqrt(eig.eigenvalues()(kept[j]));
  }

  // Free variables: [x_1; xi_1; ...; xi_{k-1}], xi_i ~ N(0, I_r).
  const Eigen::Index dim = n + r * (k - 1);
  // x_i = maps[i-1] * free + shifts[i-1].
  std::vector<Matrix> maps(k);
  std::vector<Vector> shifts(k);
  maps[0] = Matrix::Zero(n, dim);
  maps[0].leftCols(n) = Matrix::Identity(n, n);
  shifts[0] = Vector::Zero(n);
  for (int i = 1; i < k; ++i) {
    maps[i] = model.A * maps[i - 1];
    maps[i].middleCols(n + r * (i - 1), r) += G;
    shifts[i] = model.A * shifts[i - 1] + model.B * inputs[i - 1];
  }

  Matrix info = Matrix::Zero(dim, dim);
  info.topLeftCorner(n, n) = prior.cov.inverse();
  info.bottomRightCorner(r * (k - 1), r * (k - 1)) =
      Matrix::Identity(r * (k - 1), r * (k - 1));
  Vector info_vec = Vector::Zero(dim);
  info_vec.head(n) = prior.cov.inverse() * prior.mean;

  for (const BatchObservation& obs : observations) {
    if (obs.time < 1 || obs.time > k) {
      throw std::invalid_argument("observation time outside 1..k");
    }
    const Matrix h = obs.H * maps[obs.time - 1];
    const Vector offset = obs.H * shifts[obs.time - 1];
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
      if (std::isinf(obs.gamma(i))) {
        continue;
      }
      if (!(obs.gamma(i) > 0.0)) {
        throw std::invalid_argument("observation variances must be positive");
      }
      info.noalias() += h.row(i).transpose() * h.row(i) / obs.gamma(i);
      info_vec.noalias() +=
          h.row(i).transpose() * ((obs.z(i) - offset(i)) / obs.gamma(i));
    }
  }

  const Matrix free_cov = symmetrized(info.inverse());
  const Vector free_mean = free_cov * info_vec;

  Matrix window_map(static_cast<Eigen::Index>(window) * n, dim);
  Vector window_shift(static_cast<Eigen::Index>(window) * n);
  for (int b = 0; b < window; ++b) {
    window_map.middleRows(static_cast<Eigen::Index>(b) * n, n) =
        maps[k - 1 - b];
    window_shift.segment(static_cast<Eigen::Index>(b) * n, n) =
        shifts[k - 1 - b];
  }

  GaussianStats post;
  post.mean = window_map * free_mean + window_shift;
  post.cov = symmetrized(window_map * free_cov * window_map.transpose());
  return post;
}

}  // namespace tflis
