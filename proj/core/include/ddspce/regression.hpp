#pragma once

#include <Eigen/Dense>

namespace ddspce {

/// Ordinary least squares through a Householder QR of the design matrix.
/// Throws SingularNormalEquationsError when the condition number of the
/// normal equations exceeds 1e12, and InsufficientSamplesError when
/// there are fewer rows than columns.
Eigen::VectorXd ols_fit(const Eigen::MatrixXd& psi, const Eigen::VectorXd& y);

/// Leave-one-out error from the hat-matrix diagonal:
///   e_loo = sum_i [ (y_i - yhat_i) / (1 - h_i) ]^2 / sum_i (y_i - mean)^2.
/// Identical to explicitly refitting with each sample removed. Throws
/// ZeroVarianceError when all responses coincide but the numerator does
/// not vanish; returns 0 when both vanish.
double loo_error(const Eigen::MatrixXd& psi, const Eigen::VectorXd& y,
                 const Eigen::VectorXd& coeffs);

/// Finite-sample correction factor
///   T(M, M_p) = M_p / (M_p - M) * (1 + tr[(Psi^T Psi)^(-1)]),
/// applied as e_cloo = T * e_loo. Throws InsufficientSamplesError when
/// M_p <= M.
double corrected_loo(double e_loo, int terms, int samples,
                     const Eigen::MatrixXd& psi);

}  // namespace ddspce
