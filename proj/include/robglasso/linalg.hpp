#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace robglasso {

/// Dense row-major rows x cols matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Symmetric p x p matrix with full row-major storage. Every mutation goes
/// through set(), which writes both (j,k) and (k,j).
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t dim, double fill = 0.0)
      : dim_(dim), data_(dim * dim, fill) {}
  /// Symmetrizes as (A + A^T) / 2. `a` must be square.
  explicit SymMatrix(const Matrix& a);

  static SymMatrix identity(std::size_t dim);
  static SymMatrix diagonal(std::span<const double> d);
  /// Row-major list of dim*dim values, symmetrized.
  static SymMatrix from_rows(std::size_t dim, std::span<const double> values);

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t j, std::size_t k) const {
    return data_[j * dim_ + k];
  }
  void set(std::size_t j, std::size_t k, double v) {
    data_[j * dim_ + k] = v;
    data_[k * dim_ + j] = v;
  }
  std::span<const double> row(std::size_t j) const {
    return {data_.data() + j * dim_, dim_};
  }
  std::span<const double> data() const noexcept { return data_; }

  bool all_finite() const noexcept;
  double max_abs() const noexcept;
  double trace() const noexcept;
  Matrix to_matrix() const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

struct EigenDecomposition {
  std::vector<double> values;  // descending
  Matrix vectors;              // column k is the eigenvector of values[k]
};

struct CholeskyResult {
  /// Lower-triangular factor, present iff the input is positive definite.
  std::optional<Matrix> factor;
  /// 0-based leading minor that failed when `factor` is empty.
  std::size_t failed_minor = 0;

  bool ok() const noexcept { return factor.has_value(); }
};

/// Cyclic Jacobi eigendecomposition. Throws NonFiniteInput.
EigenDecomposition eigen_sym(const SymMatrix& a);
std::vector<double> eigenvalues_sym(const SymMatrix& a);

/// NotPD is reported through the result, never thrown.
CholeskyResult cholesky(const SymMatrix& a);

/// 2 * sum log(L_jj). Throws NotPositiveDefinite naming the failing minor.
double log_det_pd(const SymMatrix& a);
/// Throws NotPositiveDefinite.
SymMatrix inverse_pd(const SymMatrix& a);

/// lambda_min >= -1e-8 * max(1, lambda_max).
bool is_psd(const SymMatrix& a);
bool is_psd(std::span<const double> descending_eigenvalues);

/// U diag(values) U^T.
SymMatrix reconstruct(const Matrix& vectors, std::span<const double> values);

Matrix multiply(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
double frobenius(const Matrix& a);
double frobenius(const SymMatrix& a);
double frobenius_distance(const SymMatrix& a, const SymMatrix& b);
/// tr(A B) for symmetric A, B.
double trace_product(const SymMatrix& a, const SymMatrix& b);

}  // namespace robglasso
