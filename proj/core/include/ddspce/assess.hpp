#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ddspce/sample_matrix.hpp"

namespace ddspce {

using RowEvaluator = std::function<double(const Eigen::VectorXd&)>;
using ProgressHook = std::function<void(std::size_t done, std::size_t total)>;

/// One response per sample row, in row order. Evaluations are dispatched
/// across `workers` threads; the evaluator must be deterministic and
/// independent per row, so results equal the sequential loop.
std::vector<double> mcs_evaluate(const RowEvaluator& evaluator,
                                 const SampleMatrix& samples, int workers = 0,
                                 const ProgressHook& progress = {});

struct Histogram {
  std::vector<double> edges;  // bins + 1 ascending edges
  std::vector<int> counts;    // per bin
};

/// Empirical distribution of a batch of values: moments (n-1 standard
/// deviation), interpolated quantile function, equal-width histogram.
struct DistributionSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::vector<double> sorted;  // ascending sample copy, quantile support
  Histogram histogram;

  /// Sorted-sample linear interpolation (the common type-7 convention):
  /// quantile(0) = min, quantile(1) = max, monotone in between.
  double quantile(double p) const;

  std::string to_json_string() const;
  static DistributionSummary from_json_string(const std::string& text);
  void save(const std::string& path) const;
  static DistributionSummary load(const std::string& path);
};

DistributionSummary summarize(const std::vector<double>& values, int bins = 50);

}  // namespace ddspce
