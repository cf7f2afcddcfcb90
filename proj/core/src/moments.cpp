#include "ddspce/moments.hpp"

#include <algorithm>

#include "ddspce/errors.hpp"

namespace ddspce {

RawMoments estimate_raw_moments(const Eigen::VectorXd& column, int max_order) {
  const Eigen::Index m = column.size();
  if (m < 1) throw EmptyDataError("moment estimation needs at least one sample");
  if (max_order < 0) throw Error("max_order must be non-negative");

  RawMoments out;
  out.mu.assign(static_cast<size_t>(max_order) + 1, 0.0);
  out.mu[0] = 1.0;
  for (int j = 1; j <= max_order; ++j) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      double p = column[i];
      for (int k = 1; k < j; ++k) p *= column[i];
      acc += p;
    }
    out.mu[static_cast<size_t>(j)] = acc / static_cast<double>(m);
  }

  std::vector<double> sorted(column.data(), column.data() + m);
  std::sort(sorted.begin(), sorted.end());
  out.support_count = static_cast<int>(
      std::unique(sorted.begin(), sorted.end()) - sorted.begin());
  return out;
}

RawMoments make_raw_moments(std::vector<double> mu, int support_count) {
  if (mu.empty() || mu[0] != 1.0)
    throw Error("raw moments must start with mu[0] = 1");
  RawMoments out;
  out.mu = std::move(mu);
  out.support_count = support_count;
  return out;
}

}  // namespace ddspce
