#include "entropy_fs/maximal.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "entropy_fs/errors.hpp"
#include "entropy_fs/simd.hpp"

namespace efs {
namespace {

double parse_param(std::string_view text, std::string_view spec) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw UsageError("epsilon spec `" + std::string(spec) + "`: bad number");
  return v;
}

}  // namespace

EpsilonFunction EpsilonFunction::constant(double c) {
  if (!(c >= 1.0) || !std::isfinite(c)) throw DomainError("const ε needs c >= 1");
  return {Kind::Const, c};
}

EpsilonFunction EpsilonFunction::log_pow(double delta) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw DomainError("logpow ε needs δ >= 0");
  return {Kind::LogPow, delta};
}

EpsilonFunction EpsilonFunction::pow(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("pow ε needs δ > 0");
  return {Kind::Pow, delta};
}

EpsilonFunction EpsilonFunction::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos)
    throw UsageError("epsilon spec `" + std::string(spec) + "` needs the form kind:param");
  const auto kind = spec.substr(0, colon);
  const double v = parse_param(spec.substr(colon + 1), spec);
  try {
    if (kind == "const") return constant(v);
    if (kind == "logpow") return log_pow(v);
    if (kind == "pow") return pow(v);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  throw UsageError("unknown epsilon kind `" + std::string(kind) + "`");
}

std::string EpsilonFunction::to_string() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Const: os << "const:"; break;
    case Kind::LogPow: os << "logpow:"; break;
    case Kind::Pow: os << "pow:"; break;
  }
  os << param_;
  return os.str();
}

double EpsilonFunction::operator()(double t) const {
  switch (kind_) {
    case Kind::Const: return param_;
    case Kind::LogPow: return std::pow(std::log2(2.0 + t), 1.0 + param_);
    case Kind::Pow: return std::pow(t, param_);
  }
  return 1.0;
}

GridFunction dyadic_maximal(const GridFunction& f, const LatticeSet& lattices) {
  const auto& k = simd::active_kernels();
  const GridFunction g = f.abs();
  std::vector<double> out(f.size(), 0.0);
  for (const auto& q : enumerate_cubes(f.level(), lattices)) {
    const CellRange r = cell_range(q, f.level());
    const double avg = k.sum(g.cells().subspan(r.begin, r.size())) / static_cast<double>(r.size());
    k.max_assign(std::span(out).subspan(r.begin, r.size()), avg);
  }
  return GridFunction(f.level(), std::move(out));
}

double rho_rahm(const GridFunction& w, const DyadicCube& q) {
  const int J = w.level();
  const CellRange r = cell_range(q, J);
  const auto cells = w.cells().subspan(r.begin, r.size());
  double total = 0.0;
  for (double v : cells) total += v;
  if (!(total > 0.0)) return 1.0;

  // Subcubes of Q as halvings of its unclipped cell interval; for lattice 0
  // these are exactly the dyadic subcubes. Sums are built bottom-up, then the
  // running maximum of averages is pushed top-down to the cells.
  const int depth = J - q.level;
  const std::size_t len = std::size_t{1} << depth;
  const std::size_t start = r.begin;  // unclipped start coincides with the clipped one
  // node sums and clipped cell counts in heap order, leaves at [len, 2len)
  std::vector<double> sum(2 * len, 0.0);
  std::vector<std::size_t> count(2 * len, 0);
  for (std::size_t i = 0; i < len; ++i) {
    const std::size_t c = start + i;
    if (c < r.end) {
      sum[len + i] = w[c];
      count[len + i] = 1;
    }
  }
  for (std::size_t node = len - 1; node >= 1; --node) {
    sum[node] = sum[2 * node] + sum[2 * node + 1];
    count[node] = count[2 * node] + count[2 * node + 1];
  }
  std::vector<double> run(2 * len, 0.0);
  double integral = 0.0;
  for (std::size_t node = 1; node < 2 * len; ++node) {
    const double avg = count[node] ? sum[node] / static_cast<double>(count[node]) : 0.0;
    run[node] = node == 1 ? avg : std::max(run[node / 2], avg);
    if (node >= len && count[node]) integral += run[node];
  }
  return integral / total;
}

double rho_k(const GridFunction& w, const DyadicCube& q, int k, const ToleranceConfig& cfg) {
  if (k < 0) throw DomainError("rho_k needs k >= 0");
  const auto cells = restrict_to(w, q);
  const double avg = simd::active_kernels().sum(cells) / static_cast<double>(cells.size());
  if (!(avg > 0.0)) return 1.0;
  if (k == 0) return 1.0;
  return luxemburg_norm(cells, YoungFunction::phi_k(k), cfg) / avg;
}

GridFunction orlicz_maximal(const GridFunction& w, const YoungFunction& a,
                            const LatticeSet& lattices, const ToleranceConfig& cfg) {
  const auto& k = simd::active_kernels();
  std::vector<double> out(w.size(), 0.0);
  for (const auto& q : enumerate_cubes(w.level(), lattices)) {
    const CellRange r = cell_range(q, w.level());
    const double norm = luxemburg_norm(w.cells().subspan(r.begin, r.size()), a, cfg);
    k.max_assign(std::span(out).subspan(r.begin, r.size()), norm);
  }
  return GridFunction(w.level(), std::move(out));
}

EntropyTable::EntropyTable(const GridFunction& w, const YoungFunction& bump, int k,
                           const LatticeSet& lattices, const ToleranceConfig& cfg)
    : level_(w.level()) {
  const auto cubes = enumerate_cubes(w.level(), lattices);
  entries_.reserve(cubes.size());
  const YoungFunction phi = YoungFunction::phi_k(std::max(k, 0));
  const auto& kern = simd::active_kernels();
  for (const auto& q : cubes) {
    const CellRange r = cell_range(q, w.level());
    const auto cells = w.cells().subspan(r.begin, r.size());
    const double avg = kern.sum(cells) / static_cast<double>(cells.size());
    Entry e{q, r, 0.0, 1.0};
    if (avg > 0.0) {
      e.bump_average = luxemburg_norm(cells, bump, cfg);
      if (k > 0) e.rho = bump == phi ? e.bump_average / avg : luxemburg_norm(cells, phi, cfg) / avg;
    }
    entries_.push_back(e);
  }
}

GridFunction EntropyTable::maximal(const EpsilonFunction& eps) const {
  const auto& kern = simd::active_kernels();
  std::vector<double> out(std::size_t{1} << level_, 0.0);
  for (const auto& e : entries_) {
    const double v = e.bump_average * std::log2(2.0 + e.rho) * eps(e.rho);
    kern.max_assign(std::span(out).subspan(e.cells.begin, e.cells.size()), v);
  }
  return GridFunction(level_, std::move(out));
}

GridFunction entropy_maximal(const GridFunction& w, const EntropyProfile& profile,
                             const LatticeSet& lattices, const ToleranceConfig& cfg) {
  return EntropyTable(w, profile.bump, profile.k, lattices, cfg).maximal(profile.eps);
}

double EpsilonFunction::tower_reciprocal(int r) const {
  // 2^{2^r} overflows a double past r = 9, so large r is handled in log form.
  const double log2_arg = std::ldexp(1.0, r);  // log₂ 2^{2^r}
  switch (kind_) {
    case Kind::Const: return 1.0 / param_;
    case Kind::LogPow: {
      const double l = r <= 9 ? std::log2(2.0 + std::exp2(log2_arg)) : log2_arg;
      return std::pow(l, -(1.0 + param_));
    }
    case Kind::Pow: return std::exp2(-param_ * log2_arg);
  }
  return 1.0;
}

double epsilon_series(const EpsilonFunction& eps, int R) {
  if (R < 0) throw DomainError("epsilon_series needs R >= 0");
  double acc = 0.0;
  for (int r = 0; r <= R; ++r) acc += eps.tower_reciprocal(r);
  return std::max(acc, 1.0);
}

}  // namespace efs
