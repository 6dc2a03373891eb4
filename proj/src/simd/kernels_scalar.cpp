#include "entropy_fs/simd.hpp"
#include "kernels_detail.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace efs::simd {
namespace {

double sum(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v;
  return acc;
}

double sum_abs_dev_pow(std::span<const double> x, double c, int p) {
  double acc = 0.0;
  for (double v : x) acc += detail::ipow(std::abs(v - c), p);
  return acc;
}

double sum_abs_dev_pow_weighted(std::span<const double> x, double c, int p,
                                std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += detail::ipow(std::abs(x[i] - c), p) * y[i];
  return acc;
}

void add_scaled_abs_dev_pow(std::span<double> out, std::span<const double> x, double c,
                            int p, double s) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += s * detail::ipow(std::abs(x[i] - c), p);
}

void max_assign(std::span<double> out, double v) {
  for (double& o : out) o = std::max(o, v);
}

std::size_t count_abs_dev_greater(std::span<const double> x, double c, double t) {
  std::size_t n = 0;
  for (double v : x) n += std::abs(v - c) > t ? 1 : 0;
  return n;
}

double sum_where_greater(std::span<const double> x, double t, std::span<const double> w) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > t) acc += w[i];
  return acc;
}

double sum_power(std::span<const double> x, double s, int p) {
  double acc = 0.0;
  for (double v : x) acc += detail::ipow(std::abs(v) * s, p);
  return acc;
}

double sum_phik(std::span<const double> x, double s, int k) {
  double acc = 0.0;
  for (double v : x) {
    const double u = std::abs(v) * s;
    acc += u * detail::ipow(std::log(std::numbers::e + u), k);
  }
  return acc;
}

constexpr KernelTable kScalar{
    "scalar",           sum,
    sum_abs_dev_pow,    sum_abs_dev_pow_weighted,
    add_scaled_abs_dev_pow, max_assign,
    count_abs_dev_greater,  sum_where_greater,
    sum_power,          sum_phik,
};

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

}  // namespace efs::simd
