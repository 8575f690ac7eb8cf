#pragma once

// Data-parallel inner loops shared by the numerical modules. Each kernel has a
// scalar reference implementation and, on x86-64, an AVX2/FMA variant. The
// active variant is chosen once at startup from CPUID and can be pinned with
// the ROBGLASSO_SIMD environment variable ("scalar" or "avx2").

#include <cstddef>
#include <span>
#include <string_view>

namespace robglasso::kernels {

struct KernelTable {
  std::string_view name;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // out[i] = |x[i] - v|
  void (*abs_diff)(double v, const double* x, double* out, std::size_t n);
  // (x, y) <- (c x - s y, s x + c y)
  void (*rotate)(double* x, double* y, double c, double s, std::size_t n);
  // sum_i |a[i] - b[i]|
  double (*sum_abs_diff)(const double* a, const double* b, std::size_t n);
  // acc[i] += (x[i] - c)^2
  void (*accumulate_sq_dev)(const double* x, double c, double* acc,
                            std::size_t n);
};

const KernelTable& scalar_table() noexcept;
/// nullptr when the build or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table() noexcept;

/// Table used by the library. Resolved once; thread-safe.
const KernelTable& active() noexcept;

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}
inline void abs_diff(double v, std::span<const double> x, std::span<double> out) {
  active().abs_diff(v, x.data(), out.data(), x.size());
}
inline void rotate(std::span<double> x, std::span<double> y, double c, double s) {
  active().rotate(x.data(), y.data(), c, s, x.size());
}
inline double sum_abs_diff(std::span<const double> a, std::span<const double> b) {
  return active().sum_abs_diff(a.data(), b.data(), a.size());
}
inline void accumulate_sq_dev(std::span<const double> x, double c,
                              std::span<double> acc) {
  active().accumulate_sq_dev(x.data(), c, acc.data(), x.size());
}

}  // namespace robglasso::kernels
