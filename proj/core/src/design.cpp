#include "ddspce/design.hpp"

#include "ddspce/errors.hpp"

namespace ddspce {

double eval_multivariate(const std::vector<UnivariateBasis>& bases,
                         const MultiIndex& idx, const Eigen::VectorXd& point) {
  if (idx.size() != bases.size() ||
      point.size() != static_cast<Eigen::Index>(bases.size()))
    throw DimensionMismatchError("multi-index / basis / point size mismatch");
  double v = 1.0;
  for (size_t i = 0; i < bases.size(); ++i) {
    const int a = idx[i];
    if (a == 0) continue;  // psi^(0) == 1 for every coordinate
    v *= bases[i].eval(a, point[static_cast<Eigen::Index>(i)]);
  }
  return v;
}

Eigen::MatrixXd assemble_design_matrix(const std::vector<UnivariateBasis>& bases,
                                       const IndexSet& idx_set,
                                       const SampleMatrix& samples) {
  if (samples.cols() != static_cast<Eigen::Index>(bases.size()))
    throw DimensionMismatchError("sample width does not match basis count");
  const Eigen::Index mp = samples.rows();
  const Eigen::Index mt = static_cast<Eigen::Index>(idx_set.size());
  Eigen::MatrixXd psi(mp, mt);
  for (Eigen::Index i = 0; i < mp; ++i) {
    const Eigen::VectorXd row = samples.values.row(i);
    for (Eigen::Index j = 0; j < mt; ++j)
      psi(i, j) = eval_multivariate(bases, idx_set.indices[static_cast<size_t>(j)], row);
  }
  return psi;
}

}  // namespace ddspce
