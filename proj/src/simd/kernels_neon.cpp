#if defined(__aarch64__)

#include "entropy_fs/simd.hpp"

#include <arm_neon.h>

#include <cmath>
#include <numbers>

#include "kernels_detail.hpp"

// Two-lane float64 NEON. Tails fall back to the scalar formula per element.

namespace efs::simd {
namespace {

constexpr std::size_t kLanes = 2;

inline float64x2_t vipow(float64x2_t x, int p) {
  float64x2_t r = vdupq_n_f64(1.0);
  for (; p > 0; --p) r = vmulq_f64(r, x);
  return r;
}

// Same reduction as the AVX2 log: x = 2^e·m, m in [√½, √2), atanh series.
inline float64x2_t vlog(float64x2_t x) {
  const uint64x2_t bits = vreinterpretq_u64_f64(x);
  float64x2_t m = vreinterpretq_f64_u64(
      vorrq_u64(vandq_u64(bits, vdupq_n_u64(0x000FFFFFFFFFFFFFULL)),
                vdupq_n_u64(0x3FF0000000000000ULL)));
  float64x2_t e = vsubq_f64(vcvtq_f64_u64(vshrq_n_u64(bits, 52)), vdupq_n_f64(1023.0));
  const uint64x2_t big = vcgtq_f64(m, vdupq_n_f64(1.4142135623730951));
  m = vbslq_f64(big, vmulq_f64(m, vdupq_n_f64(0.5)), m);
  e = vaddq_f64(e, vbslq_f64(big, vdupq_n_f64(1.0), vdupq_n_f64(0.0)));
  const float64x2_t one = vdupq_n_f64(1.0);
  const float64x2_t s = vdivq_f64(vsubq_f64(m, one), vaddq_f64(m, one));
  const float64x2_t s2 = vmulq_f64(s, s);
  float64x2_t poly = vdupq_n_f64(1.0 / 23.0);
  for (int n = 10; n >= 0; --n) poly = vfmaq_f64(vdupq_n_f64(1.0 / (2.0 * n + 1.0)), poly, s2);
  const float64x2_t log_m = vmulq_f64(vaddq_f64(s, s), poly);
  return vfmaq_f64(vfmaq_f64(log_m, e, vdupq_n_f64(1.90821492927058770002e-10)), e,
                   vdupq_n_f64(6.93147180369123816490e-01));
}

double sum(std::span<const double> x) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + kLanes <= x.size(); i += kLanes) acc = vaddq_f64(acc, vld1q_f64(x.data() + i));
  double r = vaddvq_f64(acc);
  for (; i < x.size(); ++i) r += x[i];
  return r;
}

double sum_abs_dev_pow(std::span<const double> x, double c, int p) {
  const float64x2_t vc = vdupq_n_f64(c);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + kLanes <= x.size(); i += kLanes)
    acc = vaddq_f64(acc, vipow(vabdq_f64(vld1q_f64(x.data() + i), vc), p));
  double r = vaddvq_f64(acc);
  for (; i < x.size(); ++i) r += detail::ipow(std::abs(x[i] - c), p);
  return r;
}

double sum_abs_dev_pow_weighted(std::span<const double> x, double c, int p,
                                std::span<const double> y) {
  const float64x2_t vc = vdupq_n_f64(c);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + kLanes <= x.size(); i += kLanes)
    acc = vfmaq_f64(acc, vipow(vabdq_f64(vld1q_f64(x.data() + i), vc), p), vld1q_f64(y.data() + i));
  double r = vaddvq_f64(acc);
  for (; i < x.size(); ++i) r += detail::ipow(std::abs(x[i] - c), p) * y[i];
  return r;
}

void add_scaled_abs_dev_pow(std::span<double> out, std::span<const double> x, double c,
                            int p, double s) {
  const float64x2_t vc = vdupq_n_f64(c);
  const float64x2_t vs = vdupq_n_f64(s);
  std::size_t i = 0;
  for (; i + kLanes <= out.size(); i += kLanes) {
    const float64x2_t d = vipow(vabdq_f64(vld1q_f64(x.data() + i), vc), p);
    vst1q_f64(out.data() + i, vaddq_f64(vld1q_f64(out.data() + i), vmulq_f64(vs, d)));
  }
  for (; i < out.size(); ++i) out[i] += s * detail::ipow(std::abs(x[i] - c), p);
}

void max_assign(std::span<double> out, double v) {
  const float64x2_t vv = vdupq_n_f64(v);
  std::size_t i = 0;
  for (; i + kLanes <= out.size(); i += kLanes)
    vst1q_f64(out.data() + i, vmaxq_f64(vld1q_f64(out.data() + i), vv));
  for (; i < out.size(); ++i) out[i] = out[i] < v ? v : out[i];
}

std::size_t count_abs_dev_greater(std::span<const double> x, double c, double t) {
  const float64x2_t vc = vdupq_n_f64(c);
  const float64x2_t vt = vdupq_n_f64(t);
  uint64x2_t acc = vdupq_n_u64(0);
  std::size_t i = 0;
  for (; i + kLanes <= x.size(); i += kLanes) {
    const uint64x2_t gt = vcgtq_f64(vabdq_f64(vld1q_f64(x.data() + i), vc), vt);
    acc = vsubq_u64(acc, gt);  // all-ones lanes are -1
  }
  std::size_t n = vaddvq_u64(acc);
  for (; i < x.size(); ++i) n += std::abs(x[i] - c) > t ? 1 : 0;
  return n;
}

double sum_where_greater(std::span<const double> x, double t, std::span<const double> w) {
  const float64x2_t vt = vdupq_n_f64(t);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + kLanes <= x.size(); i += kLanes) {
    const uint64x2_t gt = vcgtq_f64(vld1q_f64(x.data() + i), vt);
    acc = vaddq_f64(acc, vbslq_f64(gt, vld1q_f64(w.data() + i), vdupq_n_f64(0.0)));
  }
  double r = vaddvq_f64(acc);
  for (; i < x.size(); ++i)
    if (x[i] > t) r += w[i];
  return r;
}

double sum_power(std::span<const double> x, double s, int p) {
  const float64x2_t vs = vdupq_n_f64(s);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + kLanes <= x.size(); i += kLanes)
    acc = vaddq_f64(acc, vipow(vmulq_f64(vabsq_f64(vld1q_f64(x.data() + i)), vs), p));
  double r = vaddvq_f64(acc);
  for (; i < x.size(); ++i) r += detail::ipow(std::abs(x[i]) * s, p);
  return r;
}

double sum_phik(std::span<const double> x, double s, int k) {
  const float64x2_t vs = vdupq_n_f64(s);
  const float64x2_t ve = vdupq_n_f64(std::numbers::e);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + kLanes <= x.size(); i += kLanes) {
    const float64x2_t u = vmulq_f64(vabsq_f64(vld1q_f64(x.data() + i)), vs);
    acc = vfmaq_f64(acc, u, vipow(vlog(vaddq_f64(ve, u)), k));
  }
  double r = vaddvq_f64(acc);
  for (; i < x.size(); ++i) {
    const double u = std::abs(x[i]) * s;
    r += u * detail::ipow(std::log(std::numbers::e + u), k);
  }
  return r;
}

constexpr KernelTable kNeon{
    "neon",
    sum,
    sum_abs_dev_pow,
    sum_abs_dev_pow_weighted,
    add_scaled_abs_dev_pow,
    max_assign,
    count_abs_dev_greater,
    sum_where_greater,
    sum_power,
    sum_phik,
};

}  // namespace

const KernelTable& neon_table() { return kNeon; }

}  // namespace efs::simd

#endif
