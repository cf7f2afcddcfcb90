#pragma once

#include <stdexcept>
#include <string>

namespace ddspce {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Input file does not exist or cannot be opened.
class MissingFileError : public Error {
public:
  using Error::Error;
};

/// A cell of an input file failed to parse. Row/column are 1-based and
/// refer to the data body (the header is row 0).
class ParseError : public Error {
public:
  ParseError(const std::string& what, int row, int col)
      : Error(what), row(row), col(col) {}
  int row;
  int col;
};

/// A data set with zero rows where at least one is required.
class EmptyDataError : public Error {
public:
  using Error::Error;
};

/// Operand shapes are inconsistent (column counts, vector lengths, ...).
class DimensionMismatchError : public Error {
public:
  using Error::Error;
};

/// Fewer samples than the operation needs (PCA with M < 2, corrected
/// leave-one-out with M_p <= M, ...).
class InsufficientSamplesError : public Error {
public:
  using Error::Error;
};

/// The moment matrix of a univariate basis is numerically singular:
/// too few distinct support points or pathological data.
class DegenerateSupportError : public Error {
public:
  using Error::Error;
};

/// A column has no more distinct values than the requested polynomial
/// degree, so an orthonormal basis of that degree does not exist.
class InsufficientSupportError : public Error {
public:
  using Error::Error;
};

/// The Gram quadratic form of a polynomial evaluated to a non-positive
/// value; numerical breakdown of the basis construction.
class NonPositiveNormError : public Error {
public:
  using Error::Error;
};

/// Requested a polynomial degree beyond what a basis was built for.
class DegreeOutOfRangeError : public Error {
public:
  using Error::Error;
};

/// Normal equations of a least-squares fit are singular at working
/// precision; the candidate basis is too rich for the sample size.
class SingularNormalEquationsError : public Error {
public:
  using Error::Error;
};

/// All responses are identical, so a relative error is undefined.
class ZeroVarianceError : public Error {
public:
  using Error::Error;
};

/// A sample row does not match the configured column mapping.
class MappingMismatchError : public Error {
public:
  using Error::Error;
};

/// The network is not connected from the slack bus.
class IslandedError : public Error {
public:
  using Error::Error;
};

/// A transfer transaction with an empty source or sink side.
class EmptySideError : public Error {
public:
  using Error::Error;
};

/// A serialized surrogate does not fit the configured input layout.
class ModelMismatchError : public Error {
public:
  using Error::Error;
};

/// Invalid or inconsistent run configuration.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// No operating limit bounds the transfer; the search would not terminate.
class UnboundedTransferError : public Error {
public:
  using Error::Error;
};

}  // namespace ddspce
