#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ddspce/multi_index.hpp"
#include "ddspce/sample_matrix.hpp"
#include "ddspce/univariate_basis.hpp"

namespace ddspce {

/// Tensor-product basis value Phi_idx(point) = prod_i psi_i^(alpha_i)(point_i).
double eval_multivariate(const std::vector<UnivariateBasis>& bases,
                         const MultiIndex& idx, const Eigen::VectorXd& point);

/// Design matrix with entry (i, j) = Phi_j evaluated at sample row i.
/// The zero index produces the leading all-ones column.
Eigen::MatrixXd assemble_design_matrix(const std::vector<UnivariateBasis>& bases,
                                       const IndexSet& idx_set,
                                       const SampleMatrix& samples);

}  // namespace ddspce
