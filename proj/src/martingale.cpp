#include "entropy_fs/martingale.hpp"

#include <bit>
#include <vector>

#include "entropy_fs/errors.hpp"
#include "entropy_fs/rng.hpp"

namespace efs {

double SignPattern::operator()(int level, std::int64_t index) const {
  if (!seed_) return level % 2 == 0 ? 1.0 : -1.0;
  const auto h = hash_coords(*seed_, static_cast<std::uint64_t>(level), static_cast<std::uint64_t>(index));
  return (h >> 63) ? -1.0 : 1.0;
}

std::string SignPattern::to_string() const {
  return seed_ ? "random:" + std::to_string(*seed_) : "alternating";
}

GridFunction martingale_transform(const GridFunction& f, const SignPattern& signs) {
  const std::size_t n = f.size();
  // heap-ordered subtree sums; node v at level j covers n >> j cells
  std::vector<double> sum(2 * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) sum[n + i] = f[i];
  for (std::size_t v = n - 1; v >= 1; --v) sum[v] = sum[2 * v] + sum[2 * v + 1];

  // acc[v] = Σ over strict ancestors I of v of σ_I d_I (±1 by side)
  std::vector<double> acc(2 * n, 0.0);
  for (std::size_t v = 1; v < n; ++v) {
    const int level = std::bit_width(v) - 1;
    const auto index = static_cast<std::int64_t>(v - (std::size_t{1} << level));
    const double half = static_cast<double>(n >> (level + 1));
    const double d = 0.5 * (sum[2 * v] - sum[2 * v + 1]) / half;
    const double s = signs(level, index) * d;
    acc[2 * v] = acc[v] + s;
    acc[2 * v + 1] = acc[v] - s;
  }
  return GridFunction(f.level(), std::vector<double>(acc.begin() + static_cast<std::ptrdiff_t>(n), acc.end()));
}

GridFunction iterated_commutator(const GridFunction& b, const GridFunction& f,
                                 const SignPattern& signs, int m) {
  if (m < 0) throw DomainError("commutator order must be >= 0");
  if (b.level() != f.level()) throw ResolutionError("symbol and function at different levels");
  if (m == 0) return martingale_transform(f, signs);
  const GridFunction left = b.times(iterated_commutator(b, f, signs, m - 1));
  const GridFunction right = iterated_commutator(b, b.times(f), signs, m - 1);
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = left[i] - right[i];
  return GridFunction(f.level(), std::move(out));
}

}  // namespace efs
