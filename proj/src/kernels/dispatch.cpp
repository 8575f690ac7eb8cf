#include <cstdlib>
#include <string_view>

#include "robglasso/kernels.hpp"

namespace robglasso::kernels {

#if defined(ROBGLASSO_HAVE_AVX2)
const KernelTable& avx2_kernels() noexcept;
#endif

const KernelTable* avx2_table() noexcept {
#if defined(ROBGLASSO_HAVE_AVX2)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return supported ? &avx2_kernels() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& resolve() noexcept {
  const char* forced = std::getenv("ROBGLASSO_SIMD");
  if (forced != nullptr && std::string_view(forced) == "scalar") {
    return scalar_table();
  }
  if (const KernelTable* t = avx2_table()) return *t;
  return scalar_table();
}

}  // namespace

const KernelTable& active() noexcept {
  static const KernelTable& table = resolve();
  return table;
}

}  // namespace robglasso::kernels
