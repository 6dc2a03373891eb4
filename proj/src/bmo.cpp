#include "entropy_fs/bmo.hpp"

#include <charconv>
#include <cmath>

#include "entropy_fs/errors.hpp"
#include "entropy_fs/rng.hpp"
#include "entropy_fs/simd.hpp"

namespace efs {

double dyadic_bmo_norm(const GridFunction& b) {
  const auto& k = simd::active_kernels();
  double best = 0.0;
  for (int j = 0; j < b.level(); ++j) {  // level-J cubes are single cells: zero oscillation
    const std::size_t len = b.size() >> j;
    for (std::size_t start = 0; start < b.size(); start += len) {
      const auto cells = b.cells().subspan(start, len);
      const double n = static_cast<double>(len);
      const double mean = k.sum(cells) / n;
      best = std::max(best, k.sum_abs_dev_pow(cells, mean, 1) / n);
    }
  }
  return best;
}

BmoSymbol::BmoSymbol(GridFunction values) : values_(std::move(values)), norm_(dyadic_bmo_norm(values_)) {}

BmoSymbol BmoSymbol::normalized() const {
  if (!(norm_ > 0.0)) throw DegenerateInputError("cannot normalize a constant BMO symbol");
  return BmoSymbol(values_.affine(1.0 / norm_));
}

double oscillation_level_measure(const GridFunction& b, const DyadicCube& q, double lambda) {
  if (lambda < 0.0) throw DomainError("oscillation level needs λ >= 0");
  const auto& k = simd::active_kernels();
  const auto cells = restrict_to(b, q);
  const double mean = k.sum(cells) / static_cast<double>(cells.size());
  return std::ldexp(static_cast<double>(k.count_abs_dev_greater(cells, mean, lambda)), -b.level());
}

double oscillation_exp_norm(const GridFunction& b, const DyadicCube& q, int m,
                            const ToleranceConfig& cfg) {
  if (m < 1) throw DomainError("oscillation_exp_norm needs m >= 1");
  const auto cells = restrict_to(b, q);
  const double mean = simd::active_kernels().sum(cells) / static_cast<double>(cells.size());
  std::vector<double> dev(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) dev[i] = std::pow(std::abs(cells[i] - mean), m);
  return luxemburg_norm(dev, YoungFunction::exp_pow(1.0 / m), cfg);
}

SymbolSpec SymbolSpec::parse(std::string_view spec) {
  if (spec == "haar") return {Kind::Haar, 0, 0};
  if (spec == "logdist") return {Kind::LogDist, 0, 0};
  if (spec.starts_with("martingale:")) {
    const auto rest = spec.substr(11);
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos)
      throw UsageError("bmo spec `" + std::string(spec) + "` needs martingale:SEED:DEPTH");
    SymbolSpec s{Kind::Martingale, 0, 0};
    const auto seed_txt = rest.substr(0, colon);
    const auto depth_txt = rest.substr(colon + 1);
    auto r1 = std::from_chars(seed_txt.data(), seed_txt.data() + seed_txt.size(), s.seed);
    auto r2 = std::from_chars(depth_txt.data(), depth_txt.data() + depth_txt.size(), s.depth);
    if (r1.ec != std::errc{} || r1.ptr != seed_txt.data() + seed_txt.size() ||
        r2.ec != std::errc{} || r2.ptr != depth_txt.data() + depth_txt.size() || s.depth < 0)
      throw UsageError("bmo spec `" + std::string(spec) + "`: bad SEED or DEPTH");
    return s;
  }
  throw UsageError("unknown bmo spec `" + std::string(spec) + "`");
}

std::string SymbolSpec::to_string() const {
  switch (kind) {
    case Kind::Haar: return "haar";
    case Kind::LogDist: return "logdist";
    case Kind::Martingale:
      return "martingale:" + std::to_string(seed) + ":" + std::to_string(depth);
  }
  return {};
}

GridFunction generate_symbol(const SymbolSpec& spec, int level_J) {
  const std::size_t n = std::size_t{1} << level_J;
  std::vector<double> cells(n, 0.0);
  switch (spec.kind) {
    case SymbolSpec::Kind::Haar:
      for (std::size_t i = 0; i < n; ++i) cells[i] = i < n / 2 ? 1.0 : -1.0;
      break;
    case SymbolSpec::Kind::LogDist:
      for (std::size_t i = 0; i < n; ++i)
        cells[i] = -std::log((static_cast<double>(i) + 0.5) / static_cast<double>(n));
      break;
    case SymbolSpec::Kind::Martingale:
      if (spec.depth > level_J)
        throw DomainError("martingale symbol depth " + std::to_string(spec.depth) +
                          " exceeds grid level " + std::to_string(level_J));
      for (int j = 0; j < spec.depth; ++j) {
        const std::size_t len = n >> j;
        for (std::size_t i = 0; i < (std::size_t{1} << j); ++i) {
          const std::uint64_t h = hash_coords(spec.seed, static_cast<std::uint64_t>(j), i);
          const double sigma = (h >> 63) ? -1.0 : 1.0;
          for (std::size_t c = 0; c < len; ++c) cells[i * len + c] += c < len / 2 ? sigma : -sigma;
        }
      }
      break;
  }
  return GridFunction(level_J, std::move(cells));
}

}  // namespace efs
