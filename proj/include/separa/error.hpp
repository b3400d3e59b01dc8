#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace separa {

/// Bad argument to an otherwise valid call (non-finite input, size mismatch, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of the operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed input data. Row and column are 1-based; 0 means "not applicable".
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t row, std::size_t column)
      : std::runtime_error(what), row_(row), column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

/// An estimator could not produce a value for the given data.
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Conditional ML estimates do not exist for the data (e.g. a degenerate item).
class NonExistenceError : public EstimationError {
 public:
  using EstimationError::EstimationError;
};

/// Iterative fit stopped without meeting its tolerance.
class ConvergenceError : public EstimationError {
 public:
  ConvergenceError(const std::string& what, std::vector<double> last_iterate)
      : EstimationError(what), last_iterate_(std::move(last_iterate)) {}

  const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }

 private:
  std::vector<double> last_iterate_;
};

}  // namespace separa
