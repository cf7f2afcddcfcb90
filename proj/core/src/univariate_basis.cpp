#include "ddspce/univariate_basis.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "ddspce/errors.hpp"

namespace ddspce {

std::vector<double> solve_monic_coefficients(const RawMoments& m, int l) {
  if (l < 0) throw Error("polynomial degree must be non-negative");
  if (l == 0) return {1.0};
  if (m.max_order() < 2 * l - 1)
    throw Error("need raw moments to order " + std::to_string(2 * l - 1) +
                ", have " + std::to_string(m.max_order()));

  const int n = l + 1;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (int row = 0; row < l; ++row)
    for (int k = 0; k <= l; ++k)
      a(row, k) = m.mu[static_cast<size_t>(row + k)];
  a(l, l) = 1.0;
  rhs[l] = 1.0;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smin = svd.singularValues()[n - 1];
  const double smax = svd.singularValues()[0];
  if (!(smin > 0.0) || smax / smin > 1e12)
    throw DegenerateSupportError(
        "moment matrix numerically singular at degree " + std::to_string(l) +
        " (condition estimate " +
        std::to_string(smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity()) +
        ")");

  Eigen::VectorXd p = svd.solve(rhs);
  // The last equation pins the leading coefficient; make it exact.
  p[l] = 1.0;
  return std::vector<double>(p.data(), p.data() + n);
}

double polynomial_norm(const std::vector<double>& monic, const RawMoments& m) {
  const int l = static_cast<int>(monic.size()) - 1;
  if (m.max_order() < 2 * l)
    throw Error("norm of a degree-" + std::to_string(l) +
                " polynomial needs moments to order " + std::to_string(2 * l));
  double q = 0.0;
  for (int k = 0; k <= l; ++k)
    for (int j = 0; j <= l; ++j)
      q += monic[static_cast<size_t>(k)] * monic[static_cast<size_t>(j)] *
           m.mu[static_cast<size_t>(k + j)];
  if (!(q > 0.0))
    throw NonPositiveNormError("Gram form evaluated to " + std::to_string(q) +
                               " at degree " + std::to_string(l));
  return std::sqrt(q);
}

UnivariateBasis build_basis_from_moments(const RawMoments& m, int degree,
                                         ColumnStandardization standardization) {
  if (degree < 0) throw Error("basis degree must be non-negative");
  if (m.support_count > 0 && m.support_count <= degree)
    throw InsufficientSupportError(
        "degree " + std::to_string(degree) + " basis needs more than " +
        std::to_string(degree) + " support points, column has " +
        std::to_string(m.support_count));
  UnivariateBasis b;
  b.degree = degree;
  b.standardization = standardization;
  b.monic_coeffs.reserve(static_cast<size_t>(degree) + 1);
  b.norms.reserve(static_cast<size_t>(degree) + 1);
  for (int l = 0; l <= degree; ++l) {
    b.monic_coeffs.push_back(solve_monic_coefficients(m, l));
    b.norms.push_back(polynomial_norm(b.monic_coeffs.back(), m));
  }
  return b;
}

UnivariateBasis build_univariate_basis(const Eigen::VectorXd& column, int degree) {
  const auto cs = fit_column_standardization(column);
  Eigen::VectorXd z = (column.array() - cs.shift) / cs.scale;
  RawMoments m = estimate_raw_moments(z, 2 * degree);
  return build_basis_from_moments(m, degree, cs);
}

double UnivariateBasis::eval(int l, double x) const {
  if (l < 0 || l > degree)
    throw DegreeOutOfRangeError("basis degree " + std::to_string(degree) +
                                ", requested " + std::to_string(l));
  const double z = standardization.apply(x);
  const auto& p = monic_coeffs[static_cast<size_t>(l)];
  double v = 0.0;
  for (int k = l; k >= 0; --k) v = v * z + p[static_cast<size_t>(k)];
  return v / norms[static_cast<size_t>(l)];
}

}  // namespace ddspce
