#include "ddspce/multi_index.hpp"

#include <cmath>
#include <functional>

#include "ddspce/errors.hpp"

namespace ddspce {

namespace {

double q_pseudo_norm(const MultiIndex& alpha, double q) {
  double s = 0.0;
  for (int a : alpha)
    if (a > 0) s += std::pow(static_cast<double>(a), q);
  return std::pow(s, 1.0 / q);
}

}  // namespace

IndexSet generate_index_set(int dimension, int degree, double q_norm,
                            const std::vector<int>& max_degree) {
  if (dimension < 1) throw Error("index set dimension must be >= 1");
  if (degree < 0) throw Error("index set degree must be >= 0");
  if (!(q_norm > 0.0) || q_norm > 1.0)
    throw Error("q-norm must lie in (0, 1]");
  if (!max_degree.empty() &&
      static_cast<int>(max_degree.size()) != dimension)
    throw DimensionMismatchError("per-coordinate degree cap length mismatch");

  IndexSet set;
  set.dimension = dimension;
  set.degree = degree;
  set.q_norm = q_norm;

  // Graded order: total degree ascending; within one degree the first
  // coordinate's exponent descends (lexicographic on the tuple, largest
  // first), matching (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...
  MultiIndex alpha(static_cast<size_t>(dimension), 0);
  std::function<void(int, int)> emit = [&](int pos, int remaining) {
    if (pos == dimension - 1) {
      const int cap = max_degree.empty() ? remaining
                                         : std::min(remaining, max_degree[static_cast<size_t>(pos)]);
      if (cap < remaining) return;  // cannot place the full remainder
      alpha[static_cast<size_t>(pos)] = remaining;
      if (q_pseudo_norm(alpha, q_norm) <= static_cast<double>(degree) + 1e-9)
        set.indices.push_back(alpha);
      alpha[static_cast<size_t>(pos)] = 0;
      return;
    }
    const int cap = max_degree.empty() ? remaining
                                       : std::min(remaining, max_degree[static_cast<size_t>(pos)]);
    for (int a = cap; a >= 0; --a) {
      alpha[static_cast<size_t>(pos)] = a;
      emit(pos + 1, remaining - a);
      alpha[static_cast<size_t>(pos)] = 0;
    }
  };
  for (int d = 0; d <= degree; ++d) emit(0, d);
  return set;
}

IndexSet generate_index_set(int dimension, int degree, double q_norm) {
  return generate_index_set(dimension, degree, q_norm, {});
}

}  // namespace ddspce
