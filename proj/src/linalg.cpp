#include "robglasso/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "robglasso/errors.hpp"
#include "robglasso/kernels.hpp"

namespace robglasso {

namespace {

constexpr double kJacobiRelTol = 1e-12;
constexpr int kJacobiMaxSweeps = 100;
constexpr double kPsdRelTol = 1e-8;

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

SymMatrix::SymMatrix(const Matrix& a) : dim_(a.rows()), data_(a.rows() * a.rows()) {
  if (a.rows() != a.cols()) throw InvalidArgument("SymMatrix: input is not square");
  for (std::size_t j = 0; j < dim_; ++j)
    for (std::size_t k = 0; k < dim_; ++k)
      data_[j * dim_ + k] = 0.5 * (a(j, k) + a(k, j));
}

SymMatrix SymMatrix::identity(std::size_t dim) {
  SymMatrix m(dim);
  for (std::size_t j = 0; j < dim; ++j) m.set(j, j, 1.0);
  return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
  SymMatrix m(d.size());
  for (std::size_t j = 0; j < d.size(); ++j) m.set(j, j, d[j]);
  return m;
}

SymMatrix SymMatrix::from_rows(std::size_t dim, std::span<const double> values) {
  if (values.size() != dim * dim)
    throw InvalidArgument("SymMatrix::from_rows: expected dim*dim values");
  Matrix a(dim, dim);
  std::copy(values.begin(), values.end(), a.data().begin());
  return SymMatrix(a);
}

bool SymMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

double SymMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::fabs(v));
  return m;
}

double SymMatrix::trace() const noexcept {
  double t = 0.0;
  for (std::size_t j = 0; j < dim_; ++j) t += data_[j * dim_ + j];
  return t;
}

Matrix SymMatrix::to_matrix() const {
  Matrix m(dim_, dim_);
  std::copy(data_.begin(), data_.end(), m.data().begin());
  return m;
}

EigenDecomposition eigen_sym(const SymMatrix& input) {
  if (!input.all_finite()) throw NonFiniteInput("eigen_sym: non-finite entry");
  const std::size_t p = input.dim();
  const auto& k = kernels::active();

  Matrix a = input.to_matrix();
  // Rows of vt are the eigenvectors so that each rotation touches two
  // contiguous rows.
  Matrix vt(p, p);
  for (std::size_t i = 0; i < p; ++i) vt(i, i) = 1.0;

  const double threshold = kJacobiRelTol * frobenius(input);
  for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= threshold) break;
    for (std::size_t ip = 0; ip + 1 < p; ++ip) {
      for (std::size_t iq = ip + 1; iq < p; ++iq) {
        const double apq = a(ip, iq);
        if (apq == 0.0) continue;
        const double app = a(ip, ip);
        const double aqq = a(iq, iq);
        const double theta = 0.5 * (aqq - app) / apq;
        double t = 1.0 / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        // Rotate rows ip and iq, then mirror into the columns.
        k.rotate(a.row(ip).data(), a.row(iq).data(), c, s, p);
        for (std::size_t r = 0; r < p; ++r) {
          if (r == ip || r == iq) continue;
          a(r, ip) = a(ip, r);
          a(r, iq) = a(iq, r);
        }
        a(ip, ip) = app - t * apq;
        a(iq, iq) = aqq + t * apq;
        a(ip, iq) = 0.0;
        a(iq, ip) = 0.0;
        k.rotate(vt.row(ip).data(), vt.row(iq).data(), c, s, p);
      }
    }
  }

  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

  EigenDecomposition out;
  out.values.resize(p);
  out.vectors = Matrix(p, p);
  for (std::size_t c = 0; c < p; ++c) {
    out.values[c] = a(order[c], order[c]);
    for (std::size_t r = 0; r < p; ++r) out.vectors(r, c) = vt(order[c], r);
  }
  return out;
}

std::vector<double> eigenvalues_sym(const SymMatrix& a) { return eigen_sym(a).values; }

CholeskyResult cholesky(const SymMatrix& a) {
  const std::size_t p = a.dim();
  const auto& k = kernels::active();
  Matrix l(p, p);
  for (std::size_t j = 0; j < p; ++j) {
    const double d = a(j, j) - k.dot(l.row(j).data(), l.row(j).data(), j);
    if (!(d > 0.0) || !std::isfinite(d)) return CholeskyResult{std::nullopt, j};
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < p; ++i) {
      l(i, j) = (a(i, j) - k.dot(l.row(i).data(), l.row(j).data(), j)) / ljj;
    }
  }
  return CholeskyResult{std::move(l), 0};
}

double log_det_pd(const SymMatrix& a) {
  const CholeskyResult chol = cholesky(a);
  if (!chol.ok()) throw NotPositiveDefinite(chol.failed_minor);
  double s = 0.0;
  for (std::size_t j = 0; j < a.dim(); ++j) s += std::log((*chol.factor)(j, j));
  return 2.0 * s;
}

SymMatrix inverse_pd(const SymMatrix& a) {
  const CholeskyResult chol = cholesky(a);
  if (!chol.ok()) throw NotPositiveDefinite(chol.failed_minor);
  const Matrix& l = *chol.factor;
  const std::size_t p = a.dim();
  const auto& k = kernels::active();

  // u = L^{-T}; row c of u holds column c of L^{-1} (nonzero for r >= c).
  Matrix u(p, p);
  for (std::size_t c = 0; c < p; ++c) {
    u(c, c) = 1.0 / l(c, c);
    for (std::size_t r = c + 1; r < p; ++r) {
      const double s = k.dot(l.row(r).data() + c, u.row(c).data() + c, r - c);
      u(c, r) = -s / l(r, r);
    }
  }
  // A^{-1}_{ij} = sum_{r >= max(i,j)} u(i,r) u(j,r)
  SymMatrix inv(p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i; j < p; ++j) {
      inv.set(i, j, k.dot(u.row(i).data() + j, u.row(j).data() + j, p - j));
    }
  }
  return inv;
}

bool is_psd(std::span<const double> values) {
  if (values.empty()) return true;
  const double lmax = values.front();
  const double lmin = values.back();
  return lmin >= -kPsdRelTol * std::max(1.0, lmax);
}

bool is_psd(const SymMatrix& a) {
  const auto values = eigenvalues_sym(a);
  return is_psd(values);
}

SymMatrix reconstruct(const Matrix& vectors, std::span<const double> values) {
  const std::size_t p = vectors.rows();
  const std::size_t m = values.size();
  if (vectors.cols() != m) throw InvalidArgument("reconstruct: shape mismatch");
  const auto& k = kernels::active();
  // S_ij = sum_c V_ic lambda_c V_jc
  Matrix vl(p, m);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t c = 0; c < m; ++c) vl(i, c) = vectors(i, c) * values[c];
  SymMatrix s(p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i; j < p; ++j)
      s.set(i, j, k.dot(vl.row(i).data(), vectors.row(j).data(), m));
  return s;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw InvalidArgument("multiply: shape mismatch");
  const Matrix bt = transpose(b);
  const auto& k = kernels::active();
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      c(i, j) = k.dot(a.row(i).data(), bt.row(j).data(), a.cols());
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

double frobenius(const Matrix& a) {
  const auto d = a.data();
  return std::sqrt(kernels::dot(d, d));
}

double frobenius(const SymMatrix& a) {
  const auto d = a.data();
  return std::sqrt(kernels::dot(d, d));
}

double frobenius_distance(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw InvalidArgument("frobenius_distance: dim mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    const double d = a.data()[i] - b.data()[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double trace_product(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw InvalidArgument("trace_product: dim mismatch");
  return kernels::dot(a.data(), b.data());
}

}  // namespace robglasso
