#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ddspce/multi_index.hpp"
#include "ddspce/pca.hpp"
#include "ddspce/sample_matrix.hpp"
#include "ddspce/univariate_basis.hpp"

namespace ddspce {

/// Fitting configuration. Zero-valued sizes mean "derive from the input
/// dimension": initial_mp defaults to 5N, delta_mp to N.
struct FitConfig {
  int degree = 2;          // H
  double q_norm = 0.75;    // hyperbolic truncation exponent, 0 < q <= 1
  double e_stop = 0.02;    // target corrected leave-one-out error
  int initial_mp = 0;      // starting training size (0 = 5N)
  int delta_mp = 0;        // enrichment increment (0 = N)
  int max_mp = 0;          // training budget (0 = whole sample pool)
  unsigned seed = 0;       // echoed into artifacts for reproducibility

  void validate() const;
};

/// The fitted surrogate: per-coordinate bases in decorrelated space, the
/// active multi-indices chosen by LAR and their coefficients, the PCA
/// transform from physical inputs, and fit diagnostics.
struct PceModel {
  PcaTransform pca;
  std::vector<UnivariateBasis> bases;
  std::vector<MultiIndex> active_indices;
  Eigen::VectorXd coefficients;
  double e_cloo = 0.0;
  int training_size = 0;
  FitConfig config;
  std::vector<std::string> input_columns;  // physical input layout echo

  Eigen::Index dimension() const { return pca.dimension(); }

  /// Surrogate prediction for rows in physical coordinates.
  Eigen::VectorXd evaluate(const SampleMatrix& samples) const;

  /// Analytic statistics from orthonormality: mean is the constant
  /// coefficient, variance the sum of squared non-constant coefficients.
  std::pair<double, double> moments() const;

  std::string to_json_string() const;
  static PceModel from_json_string(const std::string& text);

  void save(const std::string& path) const;
  static PceModel load(const std::string& path);
};

}  // namespace ddspce
