#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace geoc {

// Three families of failure, mirrored by the CLI exit codes:
// ArgumentError -> 1, DataError -> 2, NumericalError -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// --- argument errors ---

class DomainError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

class PreconditionError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

// --- data errors ---

class LengthError : public DataError {
 public:
  using DataError::DataError;
};

class LookupError : public DataError {
 public:
  using DataError::DataError;
};

class SchemaError : public DataError {
 public:
  using DataError::DataError;
};

class InsufficientDataError : public DataError {
 public:
  using DataError::DataError;
};

class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::vector<std::size_t> rows)
      : DataError(what), rows_(std::move(rows)) {}
  const std::vector<std::size_t>& rows() const noexcept { return rows_; }

 private:
  std::vector<std::size_t> rows_;
};

class DegenerateCoordinateError : public DataError {
 public:
  DegenerateCoordinateError(const std::string& what, std::size_t column)
      : DataError(what), column_(column) {}
  /// 1-based column index.
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

class DuplicatePointsError : public DataError {
 public:
  using DataError::DataError;
};

// --- numerical errors ---

class DegeneratePairsError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoScalingRegionError : public NumericalError {
 public:
  NoScalingRegionError(const std::string& what, std::vector<double> local_slopes)
      : NumericalError(what), local_slopes_(std::move(local_slopes)) {}
  const std::vector<double>& local_slopes() const noexcept { return local_slopes_; }

 private:
  std::vector<double> local_slopes_;
};

class SingularMapError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ResolutionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class RankDeficiencyError : public NumericalError {
 public:
  RankDeficiencyError(const std::string& what, double x, double y)
      : NumericalError(what), x_(x), y_(y) {}
  double x() const noexcept { return x_; }
  double y() const noexcept { return y_; }

 private:
  double x_;
  double y_;
};

class NearSingularError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegeneratePointError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DivergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace geoc
