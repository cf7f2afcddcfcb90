#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ddspce/moments.hpp"
#include "ddspce/standardize.hpp"

namespace ddspce {

/// Orthonormal polynomial basis of one input coordinate with respect to
/// the empirical measure of its training sample. Monic coefficient
/// triangle: monic_coeffs[l][k] is the coefficient of z^k in P^(l),
/// with monic_coeffs[l][l] == 1. psi^(l)(z) = P^(l)(z) / norms[l], with
/// z the standardized coordinate.
struct UnivariateBasis {
  int degree = 0;
  std::vector<std::vector<double>> monic_coeffs;
  std::vector<double> norms;
  ColumnStandardization standardization;

  /// Evaluate psi^(l) at a point of the coordinate the basis was built
  /// from (the stored standardization is applied first). Throws
  /// DegreeOutOfRangeError for l > degree.
  double eval(int l, double x) const;
};

/// Solve the bordered moment system for the monic coefficients of the
/// degree-l orthogonal polynomial: rows 0..l-1 impose orthogonality to
/// 1, z, ..., z^{l-1} under the empirical measure, the last row pins the
/// leading coefficient to 1. Throws DegenerateSupportError when the
/// system's condition estimate exceeds 1e12.
std::vector<double> solve_monic_coefficients(const RawMoments& m, int l);

/// ||P^(l)|| = sqrt(sum_k sum_j p_k p_j mu_{k+j}); needs moments to
/// order 2l. Throws NonPositiveNormError on numerical breakdown.
double polynomial_norm(const std::vector<double>& monic, const RawMoments& m);

/// Standardize the column, estimate moments to order 2H and build the
/// orthonormal basis of degree H. Throws InsufficientSupportError when
/// the column has no more than H distinct values.
UnivariateBasis build_univariate_basis(const Eigen::VectorXd& column, int degree);

/// Build from externally supplied moments (identity standardization by
/// default). The moments must extend to order 2H.
UnivariateBasis build_basis_from_moments(const RawMoments& m, int degree,
                                         ColumnStandardization standardization = {});

}  // namespace ddspce
