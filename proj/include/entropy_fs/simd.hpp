#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference version; an
// AVX2+FMA table (x86-64, selected at runtime via cpuid) and a NEON table
// (aarch64) compute the same quantities with a different summation order.
// Results agree with the scalar table to a few ulps per element.

#include <cstddef>
#include <span>
#include <string_view>

namespace efs::simd {

struct KernelTable {
  std::string_view name;

  // Σ x_i
  double (*sum)(std::span<const double> x);
  // Σ |x_i - c|^p, integer p >= 0 with 0^0 = 1
  double (*sum_abs_dev_pow)(std::span<const double> x, double c, int p);
  // Σ |x_i - c|^p · y_i
  double (*sum_abs_dev_pow_weighted)(std::span<const double> x, double c, int p,
                                     std::span<const double> y);
  // out_i += s · |x_i - c|^p
  void (*add_scaled_abs_dev_pow)(std::span<double> out, std::span<const double> x,
                                 double c, int p, double s);
  // out_i = max(out_i, v)
  void (*max_assign)(std::span<double> out, double v);
  // #{i : |x_i - c| > t}
  std::size_t (*count_abs_dev_greater)(std::span<const double> x, double c, double t);
  // Σ_{x_i > t} w_i
  double (*sum_where_greater)(std::span<const double> x, double t,
                              std::span<const double> w);
  // Σ (|x_i| · s)^p, integer p >= 1
  double (*sum_power)(std::span<const double> x, double s, int p);
  // Σ Φ_k(|x_i| · s) with Φ_k(u) = u · log^k(e + u)
  double (*sum_phik)(std::span<const double> x, double s, int k);
};

const KernelTable& scalar_kernels();

/// Null when the running CPU (or the build) lacks AVX2+FMA.
const KernelTable* avx2_kernels();

/// Null unless built for aarch64.
const KernelTable* neon_kernels();

/// Best table for this machine. ENTROPY_FS_KERNELS=scalar forces the reference
/// path. The choice is made once per process.
const KernelTable& active_kernels();

}  // namespace efs::simd
