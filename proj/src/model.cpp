#include "tflis/model.hpp"

#include <cassert>
#include <stdexcept>

namespace tflis {

namespace {

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

StateSpaceModel::StateSpaceModel(Matrix a, Matrix b, Matrix c, Matrix q,
                                 Matrix r)
    : A(std::move(a)),
      B(std::move(b)),
      C(std::move(c)),
      Q(std::move(q)),
      R(std::move(r)) {
  const Eigen::Index n = A.rows();
  const Eigen::Index p = C.rows();
  if (n == 0 || A.cols() != n) {
    throw std::invalid_argument("state transition matrix must be square");
  }
  if (B.rows() != n || B.cols() == 0) {
    throw std::invalid_argument("input matrix has inconsistent shape");
  }
  if (p == 0 || C.cols() != n) {
    throw std::invalid_argument("observation matrix has inconsistent shape");
  }
  if (Q.rows() != n || Q.cols() != n) {
    throw std::invalid_argument("state noise covariance has wrong shape");
  }
  if (R.rows() != p || R.cols() != p) {
    throw std::invalid_argument("observation noise covariance has wrong shape");
  }
  if (!all_finite(A) || !all_finite(B) || !all_finite(C) || !all_finite(Q) ||
      !all_finite(R)) {
    throw std::invalid_argument("model matrices must be finite");
  }

  const double q_scale = max_abs(Q);
  if (max_abs(Q - Q.transpose()) > 1e-12 * q_scale) {
    throw std::invalid_argument("state noise covariance must be symmetric");
  }
  if (q_scale > 0.0) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrized(Q));
    if (eig.eigenvalues().minCoeff() < -1e-12 * q_scale) {
      throw std::invalid_argument(
          "state noise covariance must be positive semidefinite");
    }
  }

  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      if (i != j && R(i, j) != 0.0) {
        throw std::invalid_argument(
            "observation noise covariance must be diagonal");
      }
    }
    if (R(i, i) <= 0.0) {
      throw std::invalid_argument(
          "observation noise variances must be positive");
    }
  }
}

WishartStats::WishartStats(Vector sigma_diag, double dof)
    : sigma(std::move(sigma_diag)), nu(dof) {
  if (!all_finite(sigma) || (sigma.size() > 0 && sigma.minCoeff() < 0.0)) {
    throw std::invalid_argument("scale diagonal must be finite and >= 0");
  }
  if (!(nu >= 0.0)) {
    throw std::invalid_argument("degrees of freedom must be >= 0");
  }
}

Matrix symmetrized(const Matrix& p) { return 0.5 * (p + p.transpose()); }

bool all_finite(const Vector& v) { return v.allFinite(); }

bool all_finite(const Matrix& m) { return m.allFinite(); }

bool is_valid_covariance(const Matrix& cov, double rel_tol, std::string* why) {
  if (cov.rows() != cov.cols()) {
    if (why) *why = "not square";
    return false;
  }
  if (!all_finite(cov)) {
    if (why) *why = "non-finite entries";
    return false;
  }
  const double scale = max_abs(cov);
  if (max_abs(cov - cov.transpose()) > rel_tol * scale) {
    if (why) *why = "asymmetric beyond tolerance";
    return false;
  }
  if (scale > 0.0) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrized(cov));
    if (eig.eigenvalues().minCoeff() < -rel_tol * scale) {
      if (why) *why = "negative eigenvalue beyond tolerance";
      return false;
    }
  }
  return true;
}

void debug_check_covariance(const Matrix& cov) {
#ifndef NDEBUG
  assert(is_valid_covariance(cov));
#else
  (void)cov;
#endif
}

Matrix window_output_selector(int window, int offset, const Matrix& C) {
  if (window < 1) {
    throw std::invalid_argument("window must be >= 1");
  }
  if (offset < 1 || offset > window) {
    throw std::invalid_argument("block offset out of window range");
  }
  const Eigen::Index p = C.rows();
  const Eigen::Index n = C.cols();
  Matrix sel = Matrix::Zero(p, static_cast<Eigen::Index>(window) * n);
  sel.middleCols(static_cast<Eigen::Index>(offset - 1) * n, n) = C;
  return sel;
}

WindowTransition window_transition(int window, int carried, const Matrix& A,
                                   const Matrix& B, const Matrix& Q) {
  if (window < 1) {
    throw std::invalid_argument("window must be >= 1");
  }
  if (carried != window && carried != window - 1) {
    throw std::invalid_argument("carried block count must be window or window-1");
  }
  const Eigen::Index n = A.rows();
  const Eigen::Index rows = static_cast<Eigen::Index>(carried + 1) * n;
  const Eigen::Index cols = static_cast<Eigen::Index>(window) * n;

  WindowTransition t;
  t.state = Matrix::Zero(rows, cols);
  t.state.topLeftCorner(n, n) = A;
  for (int i = 1; i <= carried; ++i) {
    t.state.block(static_cast<Eigen::Index>(i) * n,
                  static_cast<Eigen::Index>(i - 1) * n, n, n) =
        Matrix::Identity(n, n);
  }
  t.input = Matrix::Zero(rows, B.cols());
  t.input.topRows(n) = B;
  t.noise = Matrix::Zero(rows, rows);
  t.noise.topLeftCorner(n, n) = Q;
  return t;
}

}  // namespace tflis
