#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace robglasso {

/// n x p observation matrix (rows are observations). Stored column-major
/// since every estimator works one variable at a time.
class DataMatrix {
 public:
  DataMatrix() = default;
  DataMatrix(std::size_t n, std::size_t p, double fill = 0.0)
      : n_(n), p_(p), values_(n * p, fill) {}

  /// Row-major list of n*p values.
  static DataMatrix from_rows(std::size_t n, std::size_t p,
                              std::span<const double> row_major);

  std::size_t rows() const noexcept { return n_; }
  std::size_t cols() const noexcept { return p_; }

  double& operator()(std::size_t i, std::size_t j) { return values_[j * n_ + i]; }
  double operator()(std::size_t i, std::size_t j) const { return values_[j * n_ + i]; }

  std::span<const double> column(std::size_t j) const {
    return {values_.data() + j * n_, n_};
  }
  std::span<double> column(std::size_t j) { return {values_.data() + j * n_, n_}; }
  std::vector<double> row(std::size_t i) const;

  DataMatrix select_rows(std::span<const std::size_t> indices) const;
  /// Appends `y` as a new last column.
  DataMatrix with_column(std::span<const double> y, std::string name = {}) const;

  const std::vector<std::string>& column_names() const noexcept { return names_; }
  void set_column_names(std::vector<std::string> names);

  bool all_finite() const noexcept;
  bool operator==(const DataMatrix& other) const = default;

 private:
  std::size_t n_ = 0;
  std::size_t p_ = 0;
  std::vector<double> values_;
  std::vector<std::string> names_;
};

}  // namespace robglasso
