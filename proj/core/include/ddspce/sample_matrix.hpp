#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace ddspce {

/// M x N table of input realizations: rows are samples, columns are random
/// inputs in physical units. The universal currency between modules.
struct SampleMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> column_names;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }

  /// Index of a named column; throws DimensionMismatchError if absent.
  Eigen::Index column(const std::string& name) const;

  /// Throws unless every entry is finite, M >= 1, N >= 1 and the name
  /// list matches the column count.
  void validate() const;
};

/// Read a comma-separated file with a header row naming the columns.
/// Decimal point, no thousands separators. Throws MissingFileError,
/// ParseError(row, col) or EmptyDataError.
SampleMatrix load_samples(const std::string& path);

/// Parse CSV text in the load_samples format (exposed for tests and for
/// in-memory round trips).
SampleMatrix parse_samples_csv(const std::string& text);

/// Write a matrix in the same CSV dialect, floats at 17 significant digits.
void save_samples(const SampleMatrix& samples, const std::string& path);

}  // namespace ddspce
