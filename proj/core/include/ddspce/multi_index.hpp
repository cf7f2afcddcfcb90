#pragma once

#include <vector>

namespace ddspce {

/// Degrees of each coordinate in one expansion term.
using MultiIndex = std::vector<int>;

/// Truncated multi-index set, graded-lexicographic, zero index first.
struct IndexSet {
  std::vector<MultiIndex> indices;
  int dimension = 0;
  int degree = 0;
  double q_norm = 1.0;

  std::size_t size() const { return indices.size(); }
};

/// All multi-indices with (sum_i alpha_i^q)^(1/q) <= H. With q = 1 the
/// cardinality is (H+N)!/(H!N!).
IndexSet generate_index_set(int dimension, int degree, double q_norm);

/// Same, additionally capping the degree of coordinate i at max_degree[i]
/// (used when a coordinate's sample support bounds its basis degree).
IndexSet generate_index_set(int dimension, int degree, double q_norm,
                            const std::vector<int>& max_degree);

}  // namespace ddspce
