#pragma once

#include <Eigen/Dense>

#include "ddspce/sample_matrix.hpp"

namespace ddspce {

/// Per-column affine map x -> (x - shift) / scale recorded so it can be
/// inverted. scale[i] > 0 always; constant columns get scale 1.
struct AffineStandardization {
  Eigen::VectorXd shift;
  Eigen::VectorXd scale;

  Eigen::Index size() const { return shift.size(); }

  Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd invert(const Eigen::MatrixXd& z) const;
};

/// Shift every column to mean 0 and scale to sample standard deviation 1
/// (n-1 denominator). Constant columns map to all-zeros with scale 1.
std::pair<SampleMatrix, AffineStandardization> standardize(const SampleMatrix& s);

/// Single-column version used by the basis builder.
struct ColumnStandardization {
  double shift = 0.0;
  double scale = 1.0;

  double apply(double x) const { return (x - shift) / scale; }
  double invert(double z) const { return z * scale + shift; }
};

ColumnStandardization fit_column_standardization(const Eigen::VectorXd& column);

}  // namespace ddspce
