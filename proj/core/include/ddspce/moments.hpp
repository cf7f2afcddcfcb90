#pragma once

#include <Eigen/Dense>
#include <vector>

namespace ddspce {

/// Raw moments of one input coordinate, mu[j] = (1/M_p) sum_m x_m^j,
/// plus the number of distinct sample values (support points).
struct RawMoments {
  std::vector<double> mu;  // indexed 0..max_order, mu[0] == 1
  int support_count = 0;

  int max_order() const { return static_cast<int>(mu.size()) - 1; }
};

/// Estimate raw moments of a column up to `max_order` with the 1/M_p
/// convention. support_count counts exactly-distinct values.
RawMoments estimate_raw_moments(const Eigen::VectorXd& column, int max_order);

/// Wrap externally supplied moments (e.g. analytic ones) in a RawMoments.
/// `support_count` <= 0 means "unlimited support" (continuous measure).
RawMoments make_raw_moments(std::vector<double> mu, int support_count = 0);

}  // namespace ddspce
