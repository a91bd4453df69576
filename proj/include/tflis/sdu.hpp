#pragma once

#include "tflis/model.hpp"

namespace tflis {

/// Observation rows with this variance are treated as carrying no
/// information and are skipped, so callers can encode a flat likelihood
/// for individual entries without branching.
inline constexpr double kNonInformativeVariance =
    std::numeric_limits<double>::infinity();

/// Bayes update of a normal belief against z = H x + e, e ~ N(0, diag(gamma)),
/// processed one scalar observation row at a time so no matrix inversion is
/// ever formed:
///
///   K   = S h' / (gamma_i + h S h')
///   mu <- mu + K (z_i - h mu)
///   S  <- (I - K h) S (I - K h)' + K gamma_i K'
///
/// The quadratic covariance form keeps S symmetric positive semidefinite
/// even for vague priors, and the result is invariant (up to roundoff) to
/// the row order. Rows whose variance is the non-informative sentinel, or
/// whose denominator underflows below 1e-300, are skipped.
///
/// gamma holds the diagonal of the observation noise covariance; entries
/// must be positive (or the sentinel). Throws std::invalid_argument on
/// shape mismatch or invalid noise entries.
GaussianStats sequential_data_update(const GaussianStats& prior,
                                     const Matrix& H, const Vector& gamma,
                                     const Vector& z);

}  // namespace tflis
