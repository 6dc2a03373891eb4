#pragma once

// Independent reference computations for the unit tests. Nothing here calls
// into the library's numerical code.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

#include <boost/math/tools/roots.hpp>

namespace oracle {

inline constexpr double kE = std::numbers::e;

/// Root of a monotone increasing g on [lo, hi] by TOMS 748.
inline double root(const std::function<double(double)>& g, double lo, double hi) {
  boost::uintmax_t iters = 500;
  auto [a, b] = boost::math::tools::toms748_solve(g, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (a + b);
}

inline double phik(double t, int k) { return t * std::pow(std::log(kE + t), k); }

/// Luxemburg norm of `x` for an increasing Young function `a` by TOMS 748 on
/// λ ↦ mean A(|x|/λ) - 1.
inline double luxemburg(const std::vector<double>& x, const std::function<double(double)>& a) {
  double top = 0.0;
  for (double v : x) top = std::max(top, std::abs(v));
  if (top == 0.0) return 0.0;
  auto g = [&](double lambda) {
    double s = 0.0;
    for (double v : x) s += a(std::abs(v) / lambda);
    return 1.0 - s / static_cast<double>(x.size());  // increasing in λ
  };
  double hi = top;
  while (g(hi) < 0.0) hi *= 2.0;
  double lo = hi;
  while (g(lo) > 0.0) lo *= 0.5;
  return root(g, lo, hi);
}

/// Cells [begin, end) of the lattice-0 cube (level, index) at resolution J.
inline std::pair<std::size_t, std::size_t> base_cells(int J, int level, std::int64_t index) {
  const std::size_t len = std::size_t{1} << (J - level);
  return {static_cast<std::size_t>(index) * len, static_cast<std::size_t>(index + 1) * len};
}

inline double mean(const std::vector<double>& x, std::size_t b, std::size_t e) {
  double s = 0.0;
  for (std::size_t i = b; i < e; ++i) s += x[i];
  return s / static_cast<double>(e - b);
}

/// Dense martingale transform: explicit Haar coefficients per interval.
inline std::vector<double> martingale(const std::vector<double>& f, int J, const std::function<double(int, std::int64_t)>& sigma) {
  std::vector<double> out(f.size(), 0.0);
  for (int j = 0; j < J; ++j)
    for (std::int64_t i = 0; i < (std::int64_t{1} << j); ++i) {
      const auto [b, e] = base_cells(J, j, i);
      const std::size_t mid = (b + e) / 2;
      const double coef = (mean(f, b, mid) - mean(f, mid, e)) / 2.0;
      for (std::size_t c = b; c < e; ++c) out[c] += sigma(j, i) * coef * (c < mid ? 1.0 : -1.0);
    }
  return out;
}

/// [b, T_b^{m-1}] by direct recursion on dense vectors.
inline std::vector<double> commutator(const std::vector<double>& b, const std::vector<double>& f, int J,
                                      const std::function<double(int, std::int64_t)>& sigma, int m) {
  if (m == 0) return martingale(f, J, sigma);
  std::vector<double> bf(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) bf[i] = b[i] * f[i];
  const auto left = commutator(b, f, J, sigma, m - 1);
  const auto right = commutator(b, bf, J, sigma, m - 1);
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = b[i] * left[i] - right[i];
  return out;
}

}  // namespace oracle
