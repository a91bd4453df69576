#pragma once

#include <string>

#include <Eigen/Dense>

namespace tflis {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Linear Gaussian state-space system
///
///   y_k     ~ N(C x_k, R)
///   x_{k+1} ~ N(A x_k + B u_k, Q)
///
/// R must be diagonal with positive diagonal; this is what makes the
/// scalar sequential observation updates exact. Q must be symmetric
/// positive semidefinite (it may be singular).
struct StateSpaceModel {
  Matrix A;  // state transition, n x n
  Matrix B;  // input, n x m
  Matrix C;  // observation, p x n
  Matrix Q;  // state noise covariance, n x n
  Matrix R;  // observation noise covariance, p x p, diagonal

  StateSpaceModel() = default;
  StateSpaceModel(Matrix a, Matrix b, Matrix c, Matrix q, Matrix r);

  Eigen::Index state_dim() const { return A.rows(); }
  Eigen::Index input_dim() const { return B.cols(); }
  Eigen::Index output_dim() const { return C.rows(); }

  Vector observation_variances() const { return R.diagonal(); }
};

/// Mean/covariance pair of a normal belief (plain or window-augmented state).
struct GaussianStats {
  Vector mean;
  Matrix cov;

  Eigen::Index dim() const { return mean.size(); }
};

/// Inverse-Wishart statistics with a diagonal scale matrix, stored as the
/// vector of diagonal entries plus the degrees-of-freedom parameter.
struct WishartStats {
  Vector sigma;  // diagonal entries of the scale matrix, all >= 0
  double nu = 0.0;

  WishartStats() = default;
  WishartStats(Vector sigma_diag, double dof);
};

/// (P + P') / 2. Applied after every covariance-producing operation to
/// strip floating-point asymmetry.
Matrix symmetrized(const Matrix& p);

bool all_finite(const Vector& v);
bool all_finite(const Matrix& m);

/// Symmetry/PSD check with relative tolerance `rel_tol * ||cov||`.
/// Optionally reports the violated condition through `why`.
bool is_valid_covariance(const Matrix& cov, double rel_tol = 1e-9,
                         std::string* why = nullptr);

/// Debug-build covariance sanity assertion; compiled out under NDEBUG so
/// the Monte Carlo loop stays branch-free in release builds.
void debug_check_covariance(const Matrix& cov);

/// Selector that extracts one state block from a window-augmented state
/// through the observation matrix: a block row vector with C at block
/// position `offset` (1-based, 1 = newest state) and zeros elsewhere.
/// Shape: C.rows() x (window * C.cols()).
Matrix window_output_selector(int window, int offset, const Matrix& C);

/// Window-augmented one-step transition matrices. `carried` is the number
/// of old window blocks kept: window-1 once the window is saturated (the
/// oldest block is marginalized), window while it is still growing.
struct WindowTransition {
  Matrix state;  // ((carried+1)*n) x (window*n)
  Matrix input;  // ((carried+1)*n) x m, B in the first block
  Matrix noise;  // ((carried+1)*n) square, Q in the leading block
};

WindowTransition window_transition(int window, int carried, const Matrix& A,
                                   const Matrix& B, const Matrix& Q);

}  // namespace tflis
