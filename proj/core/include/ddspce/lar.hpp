#pragma once

#include <Eigen/Dense>
#include <vector>

namespace ddspce {

/// Result of hybrid least-angle-regression model selection: the chosen
/// active columns of the candidate design matrix (always including
/// column 0, the constant), their OLS-refit coefficients, and the
/// corrected leave-one-out error of that refit.
struct LarSelection {
  std::vector<int> active;    // column indices into the candidate matrix
  Eigen::VectorXd coeffs;     // aligned with `active`
  double e_cloo = 0.0;
  std::vector<int> entry_order;  // non-constant columns in LAR entry order
};

/// Run least-angle regression on the candidate columns (internally
/// centered and normalized; the constant column is always active), then
/// refit every prefix of the entry order by OLS and keep the prefix with
/// the smallest corrected leave-one-out error. Ties prefer fewer terms,
/// then earlier occurrence. Falls back to the constant-only model if
/// every richer candidate fails numerically.
LarSelection lar_select(const Eigen::MatrixXd& psi, const Eigen::VectorXd& y);

}  // namespace ddspce
