#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace robglasso {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NonFiniteInput : public Error {
 public:
  using Error::Error;
};

/// Raised when a matrix required to be positive definite is not. `minor()`
/// is the 0-based index of the leading minor where the factorization failed.
class NotPositiveDefinite : public Error {
 public:
  explicit NotPositiveDefinite(std::size_t minor)
      : Error("matrix is not positive definite (leading minor " +
              std::to_string(minor + 1) + ")"),
        minor_(minor) {}
  std::size_t minor() const noexcept { return minor_; }

 private:
  std::size_t minor_;
};

class UndefinedCorrelation : public Error {
 public:
  UndefinedCorrelation(std::size_t j, std::size_t k)
      : Error("correlation undefined for column pair (" + std::to_string(j) +
              ", " + std::to_string(k) + "): constant margin"),
        j_(j),
        k_(k) {}
  std::size_t first() const noexcept { return j_; }
  std::size_t second() const noexcept { return k_; }

 private:
  std::size_t j_, k_;
};

class DegenerateColumn : public Error {
 public:
  explicit DegenerateColumn(std::size_t column)
      : Error("column " + std::to_string(column) + " has zero robust scale"),
        column_(column) {}
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

class FoldTooSmall : public Error {
 public:
  FoldTooSmall(std::size_t folds, std::size_t smallest)
      : Error("K=" + std::to_string(folds) + " folds leave a fold of " +
              std::to_string(smallest) + " rows; at least 3 are required"),
        folds_(folds) {}
  std::size_t folds() const noexcept { return folds_; }

 private:
  std::size_t folds_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t row, std::size_t column, const std::string& what)
      : Error("row " + std::to_string(row) + ", column " +
              std::to_string(column) + ": " + what),
        row_(row),
        column_(column) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_, column_;
};

}  // namespace robglasso
