#pragma once

#include <Eigen/Dense>
#include <string>

#include "ddspce/sample_matrix.hpp"

namespace ddspce {

/// Orthogonal decorrelating transform fitted to a sample set. Rows of
/// `components` are principal directions sorted by descending eigenvalue;
/// the sign convention (largest-magnitude entry positive) makes results
/// deterministic across runs and platforms.
struct PcaTransform {
  Eigen::VectorXd mean;
  Eigen::MatrixXd components;   // N x N, rows = principal directions
  Eigen::VectorXd eigenvalues;  // descending
  Eigen::Index retained = 0;    // columns kept by apply_pca (default N)

  Eigen::Index dimension() const { return mean.size(); }

  std::string to_json_string() const;
  static PcaTransform from_json_string(const std::string& text);
};

/// Eigen-decompose the sample covariance (n-1 denominator) of `s`.
/// Throws InsufficientSamplesError when M < 2.
PcaTransform fit_pca(const SampleMatrix& s);

/// Map rows to (row - mean) * components^T, truncated to `retained`
/// columns. Throws DimensionMismatchError on column-count mismatch.
SampleMatrix apply_pca(const PcaTransform& t, const SampleMatrix& s);

/// Map decorrelated rows back via components then + mean; exact inverse
/// when retained = N.
SampleMatrix inverse_pca(const PcaTransform& t, const SampleMatrix& s);

}  // namespace ddspce
