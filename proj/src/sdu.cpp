#include "tflis/sdu.hpp"

#include <cmath>
#include <stdexcept>

namespace tflis {

GaussianStats sequential_data_update(const GaussianStats& prior,
                                     const Matrix& H, const Vector& gamma,
                                     const Vector& z) {
  const Eigen::Index n = prior.mean.size();
  const Eigen::Index m = H.rows();
  if (prior.cov.rows() != n || prior.cov.cols() != n) {
    throw std::invalid_argument("prior covariance shape does not match mean");
  }
  if (H.cols() != n) {
    throw std::invalid_argument("observation matrix width does not match state");
  }
  if (gamma.size() != m || z.size() != m) {
    throw std::invalid_argument("observation vector lengths do not match rows");
  }
  if (!all_finite(prior.mean) || !all_finite(prior.cov) || !all_finite(H) ||
      !all_finite(z)) {
    throw std::invalid_argument("non-finite input to sequential data update");
  }

  GaussianStats post = prior;
  Vector sh(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double g = gamma(i);
    if (g == kNonInformativeVariance) {
      continue;
    }
    if (!(g > 0.0)) {
      throw std::invalid_argument("observation variances must be positive");
    }
    const auto h = H.row(i);
    sh.noalias() = post.cov * h.transpose();
    const double denom = g + h.dot(sh);
    if (denom < 1e-300) {
      continue;
    }
    const Vector k = sh / denom;
    post.mean += k * (z(i) - h.dot(post.mean));
    Matrix ikh = Matrix::Identity(n, n);
    ikh.noalias() -= k * h;
    post.cov = ikh * post.cov * ikh.transpose();
    post.cov.noalias() += (g * k) * k.transpose();
  }
  post.cov = symmetrized(post.cov);
  debug_check_covariance(post.cov);
  return post;
}

}  // namespace tflis
