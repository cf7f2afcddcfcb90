#include "ddspce/regression.hpp"

#include <cmath>
#include <string>

#include "ddspce/errors.hpp"

namespace ddspce {

namespace {

// Condition number of Psi^T Psi = (sigma_max / sigma_min)^2 of Psi.
double normal_equation_condition(const Eigen::MatrixXd& psi) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(psi);
  const double smax = svd.singularValues()[0];
  const double smin = svd.singularValues()[svd.singularValues().size() - 1];
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  const double c = smax / smin;
  return c * c;
}

}  // namespace

Eigen::VectorXd ols_fit(const Eigen::MatrixXd& psi, const Eigen::VectorXd& y) {
  if (psi.rows() != y.size())
    throw DimensionMismatchError("design matrix rows != response length");
  if (psi.rows() < psi.cols())
    throw InsufficientSamplesError(
        "least squares needs at least as many samples as terms (" +
        std::to_string(psi.rows()) + " < " + std::to_string(psi.cols()) + ")");
  if (normal_equation_condition(psi) > 1e12)
    throw SingularNormalEquationsError(
        "normal equations condition number above 1e12; basis too rich for "
        "the sample size");
  return psi.householderQr().solve(y);
}

double loo_error(const Eigen::MatrixXd& psi, const Eigen::VectorXd& y,
                 const Eigen::VectorXd& coeffs) {
  if (psi.rows() != y.size() || psi.cols() != coeffs.size())
    throw DimensionMismatchError("inconsistent leave-one-out inputs");
  const Eigen::Index mp = psi.rows();

  // Hat diagonal h_i = ||row i of thin Q||^2.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(psi);
  Eigen::MatrixXd thin_q =
      qr.householderQ() * Eigen::MatrixXd::Identity(mp, psi.cols());
  const Eigen::VectorXd h = thin_q.rowwise().squaredNorm();

  const Eigen::VectorXd residual = y - psi * coeffs;
  double num = 0.0;
  for (Eigen::Index i = 0; i < mp; ++i) {
    const double d = residual[i] / (1.0 - h[i]);
    num += d * d;
  }
  const double mean = y.mean();
  const double den = (y.array() - mean).square().sum();
  if (den == 0.0) {
    if (num < 1e-24) return 0.0;
    throw ZeroVarianceError("all responses identical but residuals are not zero");
  }
  return num / den;
}

double corrected_loo(double e_loo, int terms, int samples,
                     const Eigen::MatrixXd& psi) {
  if (samples <= terms)
    throw InsufficientSamplesError(
        "corrected leave-one-out needs M_p > M (" + std::to_string(samples) +
        " <= " + std::to_string(terms) + ")");
  // tr[(Psi^T Psi)^(-1)] = ||R^(-1)||_F^2 from a QR of Psi.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(psi);
  const Eigen::MatrixXd r = qr.matrixQR()
                                .topRows(psi.cols())
                                .triangularView<Eigen::Upper>();
  const Eigen::MatrixXd rinv =
      r.triangularView<Eigen::Upper>().solve(
          Eigen::MatrixXd::Identity(psi.cols(), psi.cols()));
  const double trace = rinv.squaredNorm();
  const double t = static_cast<double>(samples) /
                   static_cast<double>(samples - terms) * (1.0 + trace);
  return t * e_loo;
}

}  // namespace ddspce
