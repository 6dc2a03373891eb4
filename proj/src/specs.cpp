#include "entropy_fs/specs.hpp"

#include <charconv>
#include <cmath>

#include "entropy_fs/errors.hpp"
#include "entropy_fs/rng.hpp"

namespace efs {
namespace {

constexpr int kBaseLevel = 6;

std::vector<std::string_view> split_args(std::string_view spec) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = spec.find(':', start);
    parts.push_back(spec.substr(start, colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  return parts;
}

double number(std::string_view text, std::string_view spec) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v))
    throw UsageError("spec `" + std::string(spec) + "`: bad number `" + std::string(text) + "`");
  return v;
}

void expect_args(const std::vector<std::string_view>& p, std::size_t lo, std::size_t hi,
                 std::string_view spec) {
  if (p.size() - 1 < lo || p.size() - 1 > hi)
    throw UsageError("spec `" + std::string(spec) + "`: wrong number of parameters");
}

GridFunction base_refined(std::vector<double> base, int level_J) {
  const int base_level = std::min(kBaseLevel, level_J);
  if (base_level < kBaseLevel) {
    // coarsen by averaging so small grids still see the same function
    const std::size_t group = std::size_t{1} << (kBaseLevel - base_level);
    std::vector<double> coarse(base.size() / group, 0.0);
    for (std::size_t i = 0; i < base.size(); ++i) coarse[i / group] += base[i] / static_cast<double>(group);
    base = std::move(coarse);
  }
  return GridFunction(base_level, std::move(base)).refined(level_J);
}

}  // namespace

GridFunction make_grid_function(std::string_view spec, int level_J, std::uint64_t seed) {
  if (spec.starts_with("file:")) {
    GridFunction g = load_grid_function(std::string(spec.substr(5)));
    if (g.level() > level_J)
      throw UsageError("file `" + std::string(spec.substr(5)) + "` has level " +
                       std::to_string(g.level()) + " above the requested " + std::to_string(level_J));
    return g.refined(level_J);
  }
  const auto p = split_args(spec);
  const auto kind = p.front();
  const std::size_t n = std::size_t{1} << level_J;
  std::vector<double> cells(n, 0.0);

  if (kind == "const") {
    expect_args(p, 0, 1, spec);
    return GridFunction::constant(level_J, p.size() > 1 ? number(p[1], spec) : 1.0);
  }
  if (kind == "power") {
    expect_args(p, 1, 1, spec);
    const double a = number(p[1], spec);
    if (!(a >= 0.0 && a < 1.0)) throw UsageError("power weight needs 0 <= a < 1");
    // exact cell averages of x^{-a}: (x1^{1-a} - x0^{1-a}) / ((1-a)·h)
    const double h = std::ldexp(1.0, -level_J);
    for (std::size_t i = 0; i < n; ++i) {
      const double x0 = static_cast<double>(i) * h;
      const double x1 = static_cast<double>(i + 1) * h;
      cells[i] = (std::pow(x1, 1.0 - a) - std::pow(x0, 1.0 - a)) / ((1.0 - a) * h);
    }
    return GridFunction(level_J, std::move(cells));
  }
  if (kind == "twovalued") {
    expect_args(p, 0, 2, spec);
    if (p.size() == 2) throw UsageError("twovalued takes both lo and hi or neither");
    const double lo = p.size() > 1 ? number(p[1], spec) : 1.0;
    const double hi = p.size() > 2 ? number(p[2], spec) : 10.0;
    for (std::size_t i = 0; i < n; ++i) cells[i] = i < n / 2 ? lo : hi;
    return GridFunction(level_J, std::move(cells));
  }
  if (kind == "lognormal") {
    expect_args(p, 0, 1, spec);
    const double sigma = p.size() > 1 ? number(p[1], spec) : 1.0;
    std::vector<double> base(std::size_t{1} << kBaseLevel);
    for (std::size_t i = 0; i < base.size(); ++i) base[i] = std::exp(sigma * hashed_normal(seed, i));
    return base_refined(std::move(base), level_J);
  }
  if (kind == "indicator") {
    expect_args(p, 0, 2, spec);
    if (p.size() == 2) throw UsageError("indicator takes both a and b or neither");
    const double a = p.size() > 1 ? number(p[1], spec) : 0.0;
    const double b = p.size() > 2 ? number(p[2], spec) : 0.5;
    if (!(0.0 <= a && a < b && b <= 1.0)) throw UsageError("indicator needs 0 <= a < b <= 1");
    const auto first = static_cast<std::size_t>(std::llround(a * static_cast<double>(n)));
    const auto last = static_cast<std::size_t>(std::llround(b * static_cast<double>(n)));
    for (std::size_t i = first; i < std::max(last, first + 1) && i < n; ++i) cells[i] = 1.0;
    return GridFunction(level_J, std::move(cells));
  }
  if (kind == "spine") {
    expect_args(p, 0, 0, spec);
    cells[0] = static_cast<double>(n);
    return GridFunction(level_J, std::move(cells));
  }
  if (kind == "random") {
    expect_args(p, 0, 0, spec);
    std::vector<double> base(std::size_t{1} << kBaseLevel);
    for (std::size_t i = 0; i < base.size(); ++i)
      base[i] = unit_interval(hash_coords(seed ^ 0x5EED5EEDULL, i));
    return base_refined(std::move(base), level_J);
  }
  throw UsageError("unknown function spec `" + std::string(spec) + "`");
}

GridFunction make_weight(std::string_view spec, int level_J, std::uint64_t seed) {
  GridFunction w = make_grid_function(spec, level_J, seed);
  if (!w.is_weight())
    throw UsageError("weight `" + std::string(spec) + "` must be nonnegative and not identically zero");
  return w;
}

const DefaultCorpus& default_corpus() {
  static const DefaultCorpus corpus{
      {"const", "power:0.3", "power:0.6", "power:0.9", "twovalued", "lognormal"},
      {"const", "indicator", "spine", "random"},
      {"haar", "logdist", "martingale:7:6"},
  };
  return corpus;
}

}  // namespace efs
