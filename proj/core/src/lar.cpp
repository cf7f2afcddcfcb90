#include "ddspce/lar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ddspce/errors.hpp"
#include "ddspce/regression.hpp"

namespace ddspce {

namespace {

struct Candidate {
  int column;             // index into psi
  Eigen::VectorXd x;      // centered, unit-norm copy
};

// Least-angle regression entry order (Efron et al.) over centered,
// unit-norm candidate columns against the centered response.
std::vector<int> lar_entry_order(const Eigen::MatrixXd& psi,
                                 const Eigen::VectorXd& y, int max_steps) {
  const Eigen::Index mp = psi.rows();
  std::vector<Candidate> cand;
  for (Eigen::Index j = 1; j < psi.cols(); ++j) {
    Eigen::VectorXd x = psi.col(j);
    x.array() -= x.mean();
    const double nrm = x.norm();
    if (nrm < 1e-12) continue;  // no variation, cannot enter
    cand.push_back({static_cast<int>(j), x / nrm});
  }

  Eigen::VectorXd resid = y;
  resid.array() -= y.mean();
  const double y_scale = std::max(resid.norm(), 1e-300);

  std::vector<int> order;
  std::vector<char> active(cand.size(), 0);
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(mp);

  while (static_cast<int>(order.size()) < max_steps) {
    // Correlations with the current residual.
    double cmax = 0.0;
    int jbest = -1;
    std::vector<double> c(cand.size());
    for (size_t j = 0; j < cand.size(); ++j) {
      c[j] = cand[j].x.dot(resid - mu);
      if (!active[j] && std::abs(c[j]) > cmax) {
        cmax = std::abs(c[j]);
        jbest = static_cast<int>(j);
      }
    }
    if (jbest < 0 || cmax <= 1e-13 * y_scale) break;
    active[static_cast<size_t>(jbest)] = 1;
    order.push_back(jbest);

    // Equiangular direction over the active set.
    const int na = static_cast<int>(order.size());
    Eigen::MatrixXd xa(mp, na);
    for (int k = 0; k < na; ++k) {
      const size_t j = static_cast<size_t>(order[static_cast<size_t>(k)]);
      const double s = c[j] >= 0.0 ? 1.0 : -1.0;
      xa.col(k) = s * cand[j].x;
    }
    Eigen::MatrixXd g = xa.transpose() * xa;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
    Eigen::VectorXd w0 = ldlt.solve(Eigen::VectorXd::Ones(na));
    const double denom = w0.sum();
    if (ldlt.info() != Eigen::Success || !(denom > 0.0) ||
        !w0.allFinite()) {
      // Collinear with the current active set; withdraw permanently.
      order.pop_back();
      active[static_cast<size_t>(jbest)] = 2;  // excluded
      continue;
    }
    const double aa = 1.0 / std::sqrt(denom);
    Eigen::VectorXd u = xa * (aa * w0);

    // Step length to the next equal-correlation point.
    double gamma = cmax / aa;  // full jump if nothing else can enter
    for (size_t j = 0; j < cand.size(); ++j) {
      if (active[j]) continue;
      const double aj = cand[j].x.dot(u);
      for (const double g2 : {(cmax - c[j]) / (aa - aj), (cmax + c[j]) / (aa + aj)}) {
        if (g2 > 1e-14 && g2 < gamma) gamma = g2;
      }
    }
    if (!(gamma > 0.0) || !std::isfinite(gamma)) break;
    mu += gamma * u;
  }

  std::vector<int> columns;
  columns.reserve(order.size());
  for (int j : order) columns.push_back(cand[static_cast<size_t>(j)].column);
  return columns;
}

}  // namespace

LarSelection lar_select(const Eigen::MatrixXd& psi, const Eigen::VectorXd& y) {
  if (psi.rows() != y.size())
    throw DimensionMismatchError("design matrix rows != response length");
  if (psi.cols() < 1) throw Error("candidate matrix has no columns");
  const int mp = static_cast<int>(psi.rows());

  // The corrected error needs M_p > number of terms, constant included.
  const int max_steps =
      std::max(0, std::min<int>(static_cast<int>(psi.cols()) - 1, mp - 2));
  const std::vector<int> entry = lar_entry_order(psi, y, max_steps);

  LarSelection best;
  best.entry_order = entry;
  best.e_cloo = std::numeric_limits<double>::infinity();
  bool have = false;

  std::vector<int> cols = {0};
  for (int k = 0; k <= static_cast<int>(entry.size()); ++k) {
    if (k > 0) cols.push_back(entry[static_cast<size_t>(k - 1)]);
    if (mp <= static_cast<int>(cols.size())) break;
    Eigen::MatrixXd sub(psi.rows(), static_cast<Eigen::Index>(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j) sub.col(static_cast<Eigen::Index>(j)) = psi.col(cols[j]);
    try {
      const Eigen::VectorXd coef = ols_fit(sub, y);
      const double eloo = loo_error(sub, y, coef);
      const double ecloo =
          corrected_loo(eloo, static_cast<int>(cols.size()), mp, sub);
      if (!std::isfinite(ecloo)) continue;
      if (!have || ecloo < best.e_cloo) {
        best.active = cols;
        best.coeffs = coef;
        best.e_cloo = ecloo;
        have = true;
      }
    } catch (const Error&) {
      continue;  // singular prefix: try the next one
    }
  }

  if (!have) {
    // Constant-only fallback: always well-posed.
    best.active = {0};
    best.coeffs = Eigen::VectorXd::Constant(1, y.mean());
    const Eigen::MatrixXd ones = psi.col(0);
    try {
      const double eloo = loo_error(ones, y, best.coeffs);
      best.e_cloo = mp > 1 ? corrected_loo(eloo, 1, mp, ones) : eloo;
    } catch (const ZeroVarianceError&) {
      best.e_cloo = 0.0;
    }
  }
  return best;
}

}  // namespace ddspce
