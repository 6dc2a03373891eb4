#include "entropy_fs/simd.hpp"

#include <cstdlib>
#include <string_view>

namespace efs::simd {

#if defined(__x86_64__) || defined(_M_X64)
const KernelTable& avx2_table();  // kernels_avx2.cpp

const KernelTable* avx2_kernels() {
  static const bool ok = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return ok ? &avx2_table() : nullptr;
}
#else
const KernelTable* avx2_kernels() { return nullptr; }
#endif

#if defined(__aarch64__)
const KernelTable& neon_table();  // kernels_neon.cpp

const KernelTable* neon_kernels() { return &neon_table(); }
#else
const KernelTable* neon_kernels() { return nullptr; }
#endif

const KernelTable& active_kernels() {
  static const KernelTable& chosen = []() -> const KernelTable& {
    if (const char* env = std::getenv("ENTROPY_FS_KERNELS");
        env != nullptr && std::string_view(env) == "scalar")
      return scalar_kernels();
    if (const auto* t = avx2_kernels()) return *t;
    if (const auto* t = neon_kernels()) return *t;
    return scalar_kernels();
  }();
  return chosen;
}

}  // namespace efs::simd
