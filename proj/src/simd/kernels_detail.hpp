#pragma once

namespace efs::simd::detail {

inline double ipow(double x, int p) {
  double r = 1.0;
  for (; p > 0; --p) r *= x;
  return r;
}

}  // namespace efs::simd::detail
