#if defined(__x86_64__) || defined(_M_X64)

#include "entropy_fs/simd.hpp"

#include <immintrin.h>

#include <bit>
#include <cstdint>

// Functions carry a target attribute instead of the whole file being built with
// -mavx2, so no AVX code leaks into inline functions shared with other TUs.
#define EFS_AVX2 __attribute__((target("avx2,fma")))

namespace efs::simd {
namespace {

constexpr std::size_t kLanes = 4;

EFS_AVX2 inline __m256i tail_mask(std::size_t n) {
  const __m256i idx = _mm256_setr_epi64x(0, 1, 2, 3);
  return _mm256_cmpgt_epi64(_mm256_set1_epi64x(static_cast<long long>(n)), idx);
}

EFS_AVX2 inline __m256d load(const double* p, std::size_t rem) {
  if (rem >= kLanes) return _mm256_loadu_pd(p);
  return _mm256_maskload_pd(p, tail_mask(rem));
}

EFS_AVX2 inline __m256d keep(__m256d v, std::size_t rem) {
  if (rem >= kLanes) return v;
  return _mm256_and_pd(v, _mm256_castsi256_pd(tail_mask(rem)));
}

EFS_AVX2 inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d a = _mm_add_pd(lo, _mm_unpackhi_pd(lo, lo));
  const __m128d b = _mm_add_pd(hi, _mm_unpackhi_pd(hi, hi));
  return _mm_cvtsd_f64(_mm_add_sd(a, b));
}

EFS_AVX2 inline __m256d vabs(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

EFS_AVX2 inline __m256d vipow(__m256d x, int p) {
  __m256d r = _mm256_set1_pd(1.0);
  for (; p > 0; --p) r = _mm256_mul_pd(r, x);
  return r;
}

// Natural log for positive normal finite inputs. x = 2^e·m with m in
// [√½, √2); log m = 2·atanh(s), s = (m-1)/(m+1), |s| <= 0.1716, and the atanh
// series truncated after s^23 is below 1e-17 relative.
EFS_AVX2 inline __m256d vlog(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));
  // biased exponent -> double via the 2^52 magic constant
  const __m256i biased = _mm256_srli_epi64(bits, 52);
  const __m256i magic = _mm256_set1_epi64x(0x4330000000000000LL);
  __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(biased, magic)),
                            _mm256_set1_pd(4503599627370496.0 + 1023.0));
  const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(1.4142135623730951), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  e = _mm256_add_pd(e, _mm256_and_pd(big, _mm256_set1_pd(1.0)));

  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d s = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d s2 = _mm256_mul_pd(s, s);
  __m256d poly = _mm256_set1_pd(1.0 / 23.0);
  for (int n = 10; n >= 0; --n)
    poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / (2.0 * n + 1.0)));
  const __m256d log_m = _mm256_mul_pd(_mm256_add_pd(s, s), poly);

  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
  return _mm256_fmadd_pd(e, ln2_hi, _mm256_fmadd_pd(e, ln2_lo, log_m));
}

EFS_AVX2 double sum(std::span<const double> x) {
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < x.size(); i += kLanes)
    acc = _mm256_add_pd(acc, load(x.data() + i, x.size() - i));
  return hsum(acc);
}

EFS_AVX2 double sum_abs_dev_pow(std::span<const double> x, double c, int p) {
  const __m256d vc = _mm256_set1_pd(c);
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < x.size(); i += kLanes) {
    const std::size_t rem = x.size() - i;
    const __m256d d = vabs(_mm256_sub_pd(load(x.data() + i, rem), vc));
    acc = _mm256_add_pd(acc, keep(vipow(d, p), rem));
  }
  return hsum(acc);
}

EFS_AVX2 double sum_abs_dev_pow_weighted(std::span<const double> x, double c, int p,
                                         std::span<const double> y) {
  const __m256d vc = _mm256_set1_pd(c);
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < x.size(); i += kLanes) {
    const std::size_t rem = x.size() - i;
    const __m256d d = vabs(_mm256_sub_pd(load(x.data() + i, rem), vc));
    acc = _mm256_fmadd_pd(vipow(d, p), load(y.data() + i, rem), acc);
  }
  return hsum(acc);
}

EFS_AVX2 void add_scaled_abs_dev_pow(std::span<double> out, std::span<const double> x,
                                     double c, int p, double s) {
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + kLanes <= out.size(); i += kLanes) {
    const __m256d d = vabs(_mm256_sub_pd(_mm256_loadu_pd(x.data() + i), vc));
    const __m256d o = _mm256_loadu_pd(out.data() + i);
    _mm256_storeu_pd(out.data() + i, _mm256_add_pd(o, _mm256_mul_pd(vs, vipow(d, p))));
  }
  if (i < out.size()) {
    const std::size_t rem = out.size() - i;
    const __m256i mask = tail_mask(rem);
    const __m256d d = vabs(_mm256_sub_pd(_mm256_maskload_pd(x.data() + i, mask), vc));
    const __m256d o = _mm256_maskload_pd(out.data() + i, mask);
    _mm256_maskstore_pd(out.data() + i, mask, _mm256_add_pd(o, _mm256_mul_pd(vs, vipow(d, p))));
  }
}

EFS_AVX2 void max_assign(std::span<double> out, double v) {
  const __m256d vv = _mm256_set1_pd(v);
  std::size_t i = 0;
  for (; i + kLanes <= out.size(); i += kLanes)
    _mm256_storeu_pd(out.data() + i, _mm256_max_pd(_mm256_loadu_pd(out.data() + i), vv));
  if (i < out.size()) {
    const __m256i mask = tail_mask(out.size() - i);
    const __m256d o = _mm256_maskload_pd(out.data() + i, mask);
    _mm256_maskstore_pd(out.data() + i, mask, _mm256_max_pd(o, vv));
  }
}

EFS_AVX2 std::size_t count_abs_dev_greater(std::span<const double> x, double c, double t) {
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d vt = _mm256_set1_pd(t);
  std::size_t n = 0;
  for (std::size_t i = 0; i < x.size(); i += kLanes) {
    const std::size_t rem = x.size() - i;
    const __m256d d = vabs(_mm256_sub_pd(load(x.data() + i, rem), vc));
    __m256d gt = _mm256_cmp_pd(d, vt, _CMP_GT_OQ);
    gt = keep(gt, rem);
    n += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(_mm256_movemask_pd(gt))));
  }
  return n;
}

EFS_AVX2 double sum_where_greater(std::span<const double> x, double t,
                                  std::span<const double> w) {
  const __m256d vt = _mm256_set1_pd(t);
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < x.size(); i += kLanes) {
    const std::size_t rem = x.size() - i;
    const __m256d gt = _mm256_cmp_pd(load(x.data() + i, rem), vt, _CMP_GT_OQ);
    acc = _mm256_add_pd(acc, keep(_mm256_and_pd(gt, load(w.data() + i, rem)), rem));
  }
  return hsum(acc);
}

EFS_AVX2 double sum_power(std::span<const double> x, double s, int p) {
  const __m256d vs = _mm256_set1_pd(s);
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < x.size(); i += kLanes) {
    const std::size_t rem = x.size() - i;
    const __m256d u = _mm256_mul_pd(vabs(load(x.data() + i, rem)), vs);
    acc = _mm256_add_pd(acc, vipow(u, p));  // masked lanes load 0 and 0^p = 0
  }
  return hsum(acc);
}

EFS_AVX2 double sum_phik(std::span<const double> x, double s, int k) {
  const __m256d vs = _mm256_set1_pd(s);
  const __m256d ve = _mm256_set1_pd(2.718281828459045);
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < x.size(); i += kLanes) {
    const std::size_t rem = x.size() - i;
    const __m256d u = _mm256_mul_pd(vabs(load(x.data() + i, rem)), vs);
    const __m256d l = vlog(_mm256_add_pd(ve, u));
    acc = _mm256_fmadd_pd(u, vipow(l, k), acc);  // u = 0 on masked lanes
  }
  return hsum(acc);
}

constexpr KernelTable kAvx2{
    "avx2",
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

const KernelTable& avx2_table() { return kAvx2; }

}  // namespace efs::simd

#endif
