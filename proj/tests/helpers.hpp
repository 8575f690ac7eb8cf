#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "robglasso/data_matrix.hpp"
#include "robglasso/linalg.hpp"
#include "robglasso/rng.hpp"

namespace testing {

using robglasso::DataMatrix;
using robglasso::Matrix;
using robglasso::Rng;
using robglasso::SymMatrix;

inline std::vector<double> normal_vector(std::size_t n, Rng& rng, double sd = 1.0) {
  std::normal_distribution<double> d(0.0, sd);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

inline DataMatrix normal_data(std::size_t n, std::size_t p, Rng& rng) {
  DataMatrix x(n, p);
  std::normal_distribution<double> d(0.0, 1.0);
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t i = 0; i < n; ++i) x(i, j) = d(rng);
  return x;
}

inline SymMatrix random_symmetric(std::size_t p, Rng& rng, double sd = 1.0) {
  std::normal_distribution<double> d(0.0, sd);
  SymMatrix a(p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i; j < p; ++j) a.set(i, j, d(rng));
  return a;
}

/// G G^T / k with G of size p x k; rank min(p, k).
inline SymMatrix random_psd(std::size_t p, std::size_t k, Rng& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  Matrix g(p, k);
  for (double& v : g.data()) v = d(rng);
  SymMatrix a(p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i; j < p; ++j) {
      double s = 0.0;
      for (std::size_t t = 0; t < k; ++t) s += g(i, t) * g(j, t);
      a.set(i, j, s / static_cast<double>(k));
    }
  return a;
}

inline SymMatrix random_pd(std::size_t p, Rng& rng) {
  SymMatrix a = random_psd(p, p + 3, rng);
  for (std::size_t i = 0; i < p; ++i) a.set(i, i, a(i, i) + 0.5);
  return a;
}

inline double max_abs_diff(const SymMatrix& a, const SymMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) m = std::max(m, std::fabs(a(i, j) - b(i, j)));
  return m;
}

/// Plain triple loop, independent of the library's kernels.
inline Matrix naive_product(const SymMatrix& a, const SymMatrix& b) {
  const std::size_t p = a.dim();
  Matrix c(p, p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < p; ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

}  // namespace testing
