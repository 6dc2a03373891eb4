#include "entropy_fs/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "entropy_fs/errors.hpp"
#include "entropy_fs/martingale.hpp"
#include "entropy_fs/simd.hpp"
#include "entropy_fs/specs.hpp"

namespace efs {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string lattice_key(const LatticeSet& l) {
  std::string s;
  for (int v : l) s += std::to_string(v);
  return s;
}

std::string grid_key(const std::string& spec, int J, std::uint64_t seed) {
  return spec + "|" + std::to_string(J) + "|" + std::to_string(seed);
}

double integrate_abs_product(const GridFunction& a, const GridFunction& b) {
  // Σ |a|·b·h
  return simd::active_kernels().sum_abs_dev_pow_weighted(a.cells(), 0.0, 1, b.cells()) * a.cell_width();
}

double weighted_measure_above(const GridFunction& g, const GridFunction& w, double t) {
  return simd::active_kernels().sum_where_greater(g.cells(), t, w.cells()) * w.cell_width();
}

double phi_m(double u, int m) {
  return u * std::pow(std::log(std::numbers::e + u), m);
}

/// ∫ Φ_m(scale·|f|/t)·M
double integrate_phi(const GridFunction& f, double scale, double t, int m, const GridFunction& maximal) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0.0) continue;
    acc += phi_m(scale * std::abs(f[i]) / t, m) * maximal[i];
  }
  return acc * f.cell_width();
}

RatioReport make_report(std::string_view name, const ExperimentConfig& cfg, bool symbol, bool eps,
                        double t, double lhs, double rhs) {
  RatioReport r;
  r.experiment = std::string(name);
  r.level = cfg.level;
  r.m = cfg.m;
  r.weight = cfg.weight;
  r.function = cfg.function;
  r.bmo = symbol ? cfg.bmo : "-";
  r.epsilon = eps ? cfg.epsilon : "-";
  r.t = t;
  r.lhs = lhs;
  r.rhs = rhs;
  r.ratio = ratio_of(lhs, rhs);
  r.infinite = std::isinf(r.ratio);
  return r;
}

struct Inputs {
  const GridFunction* w;
  const GridFunction* f;
  GridFunction abs_f;
  double base;
};

Inputs load_inputs(const ExperimentConfig& cfg, ExperimentCache& cache) {
  cfg.validate();
  const GridFunction& w = cache.weight(cfg.weight, cfg.level, cfg.seed);
  const GridFunction& f = cache.function(cfg.function, cfg.level, cfg.seed);
  GridFunction abs_f = f.abs();
  const double mean = cube_average(abs_f, kUnitCube);
  return {&w, &f, std::move(abs_f), mean > 0.0 ? mean : 1.0};
}

/// Model operator output for the perez/rahm experiments.
GridFunction model_output(const ExperimentConfig& cfg, ExperimentCache& cache, const Inputs& in) {
  if (!in.abs_f.is_weight()) return GridFunction::zeros(cfg.level);
  if (cfg.model == ModelOperator::Martingale)
    return martingale_transform(in.abs_f, SignPattern::alternating()).abs();
  const CarlesonFamily& s = cache.family(cfg.function, cfg.level, cfg.seed, cfg.sparse_ratio.value_or(2.0));
  return sparse_commutator_apply(s, GridFunction::zeros(cfg.level), in.abs_f, 0, 0);
}

/// Family for the commutator experiments with 56^m(α-1) < 1 enforced.
const CarlesonFamily& commutator_family(const ExperimentConfig& cfg, ExperimentCache& cache) {
  const CarlesonFamily& s = cache.family(cfg.function, cfg.level, cfg.seed, cfg.commutator_ratio());
  const double excess = std::pow(56.0, cfg.m) * (s.alpha() - 1.0);
  if (!(excess < 1.0)) {
    const auto [alpha, witness] = carleson_constant_with_witness(s.cubes());
    throw ConfigError("sparse family violates 56^m(α-1) < 1: α = " + std::to_string(alpha.value()) +
                      " attained at cube " + to_string(witness) + "; raise --ratio");
  }
  return s;
}

std::vector<RatioReport> level_set_reports(std::string_view name, const ExperimentConfig& cfg,
                                           bool symbol, bool eps, const Inputs& in,
                                           const GridFunction& g, Clock::time_point start,
                                           auto&& rhs_at) {
  std::vector<RatioReport> out;
  for (double t : cfg.t_grid.values(in.base))
    out.push_back(make_report(name, cfg, symbol, eps, t, weighted_measure_above(g, *in.w, t), rhs_at(t)));
  const double ms = elapsed_ms(start);
  for (auto& r : out) r.wall_ms = ms;
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

TGrid TGrid::parse(std::string_view spec) {
  TGrid g;
  const auto c1 = spec.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : spec.find(':', c1 + 1);
  if (c2 == std::string_view::npos) throw UsageError("t-grid `" + std::string(spec) + "` needs LO:HI:N");
  auto num = [&](std::string_view s, auto& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || p != s.data() + s.size())
      throw UsageError("t-grid `" + std::string(spec) + "`: bad field `" + std::string(s) + "`");
  };
  num(spec.substr(0, c1), g.lo);
  num(spec.substr(c1 + 1, c2 - c1 - 1), g.hi);
  num(spec.substr(c2 + 1), g.steps);
  try {
    g.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  return g;
}

void TGrid::validate() const {
  if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi)) throw DomainError("t-grid needs 0 < lo <= hi");
  if (steps < 1) throw DomainError("t-grid needs at least one step");
}

std::vector<double> TGrid::values(double base) const {
  validate();
  const double scale = relative ? base : 1.0;
  std::vector<double> ts;
  ts.reserve(static_cast<std::size_t>(steps));
  if (steps == 1) {
    ts.push_back(lo * scale);
    return ts;
  }
  const double step = std::log(hi / lo) / (steps - 1);
  for (int i = 0; i < steps; ++i) ts.push_back(scale * lo * std::exp(step * i));
  return ts;
}

void ExperimentConfig::validate() const {
  if (level < 1 || level > kMaxLevel) throw ConfigError("level out of range");
  if (m < 0) throw ConfigError("m must be >= 0");
  if (series_R < 0) throw ConfigError("series truncation R must be >= 0");
  if (sparse_ratio && !(*sparse_ratio > 1.0)) throw ConfigError("sparse ratio must exceed 1");
  if (!(rho > 0.0)) throw ConfigError("ρ must be positive");
  if (lattices.empty()) throw ConfigError("at least one lattice is required");
  t_grid.validate();
  tol.validate();
}

double ExperimentConfig::commutator_ratio() const {
  return sparse_ratio.value_or(2.0 * std::pow(56.0, m) + 1.0);
}

double ratio_of(double lhs, double rhs) {
  if (lhs == 0.0) return 0.0;
  if (rhs == 0.0) return std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

std::pair<double, double> weak_norm_on_grid(const GridFunction& g, const GridFunction& w,
                                            const std::vector<double>& ts) {
  double best = 0.0, arg = ts.empty() ? 0.0 : ts.front();
  for (double t : ts) {
    const double v = t * weighted_measure_above(g, w, t);
    if (v > best) {
      best = v;
      arg = t;
    }
  }
  return {best, arg};
}

std::pair<double, double> weak_norm_exact(const GridFunction& g, const GridFunction& w) {
  if (g.level() != w.level()) throw ResolutionError("weak norm: g and w at different levels");
  std::vector<std::size_t> order(g.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return g[a] > g[b]; });
  double mass = 0.0, best = 0.0, arg = 0.0;
  for (std::size_t pos = 0; pos < order.size();) {
    const double v = g[order[pos]];
    if (!(v > 0.0)) break;
    while (pos < order.size() && g[order[pos]] == v) mass += w[order[pos++]];
    const double cand = v * mass * g.cell_width();
    if (cand > best) {
      best = cand;
      arg = v;
    }
  }
  return {best, arg};
}

// ---------------------------------------------------------------------------

const GridFunction& ExperimentCache::weight(const std::string& spec, int J, std::uint64_t seed) {
  const auto key = "w|" + grid_key(spec, J, seed);
  auto it = grids_.find(key);
  if (it == grids_.end()) {
    GridFunction w = make_grid_function(spec, J, seed);
    if (!w.is_weight()) throw ConfigError("weight `" + spec + "` is degenerate: it must be >= 0 and not identically 0");
    it = grids_.emplace(key, std::move(w)).first;
  }
  return it->second;
}

const GridFunction& ExperimentCache::function(const std::string& spec, int J, std::uint64_t seed) {
  const auto key = "f|" + grid_key(spec, J, seed);
  auto it = grids_.find(key);
  if (it == grids_.end()) it = grids_.emplace(key, make_grid_function(spec, J, seed)).first;
  return it->second;
}

const BmoSymbol& ExperimentCache::symbol(const std::string& spec, int J) {
  const auto key = spec + "|" + std::to_string(J);
  auto it = symbols_.find(key);
  if (it == symbols_.end())
    it = symbols_.emplace(key, BmoSymbol(generate_symbol(SymbolSpec::parse(spec), J))).first;
  return it->second;
}

const GridFunction& ExperimentCache::hl_maximal(const std::string& spec, int J, std::uint64_t seed,
                                                const LatticeSet& lattices, bool is_weight) {
  const auto key = "M|" + std::string(is_weight ? "w|" : "f|") + grid_key(spec, J, seed) + "|" + lattice_key(lattices);
  auto it = grids_.find(key);
  if (it == grids_.end()) {
    const GridFunction& g = is_weight ? weight(spec, J, seed) : function(spec, J, seed);
    it = grids_.emplace(key, dyadic_maximal(g, lattices)).first;
  }
  return it->second;
}

const GridFunction& ExperimentCache::orlicz_maximal(const std::string& weight_spec, int J,
                                                    std::uint64_t seed, const YoungFunction& a,
                                                    const LatticeSet& lattices,
                                                    const ToleranceConfig& tol) {
  const auto key = "MA|" + grid_key(weight_spec, J, seed) + "|" + a.to_string() + "|" + lattice_key(lattices);
  auto it = grids_.find(key);
  if (it == grids_.end())
    it = grids_.emplace(key, efs::orlicz_maximal(weight(weight_spec, J, seed), a, lattices, tol)).first;
  return it->second;
}

const EntropyTable& ExperimentCache::entropy_table(const std::string& weight_spec, int J,
                                                   std::uint64_t seed, const YoungFunction& a, int k,
                                                   const LatticeSet& lattices,
                                                   const ToleranceConfig& tol) {
  const auto key = grid_key(weight_spec, J, seed) + "|" + a.to_string() + "|" + std::to_string(k) +
                   "|" + lattice_key(lattices);
  auto it = tables_.find(key);
  if (it == tables_.end())
    it = tables_.emplace(key, std::make_unique<EntropyTable>(weight(weight_spec, J, seed), a, k, lattices, tol)).first;
  return *it->second;
}

const CarlesonFamily& ExperimentCache::family(const std::string& function_spec, int J,
                                              std::uint64_t seed, double ratio) {
  std::string key = grid_key(function_spec, J, seed) + "|";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, ratio);
  key.append(buf, res.ptr);
  auto it = families_.find(key);
  if (it == families_.end())
    it = families_.emplace(key, build_sparse_from_function(function(function_spec, J, seed).abs(), ratio)).first;
  return it->second;
}

// ---------------------------------------------------------------------------

std::vector<RatioReport> run_fs_ratio(const ExperimentConfig& cfg, ExperimentCache* cache) {
  ExperimentCache local;
  ExperimentCache& c = cache ? *cache : local;
  const auto start = Clock::now();
  const Inputs in = load_inputs(cfg, c);
  const GridFunction& mf = c.hl_maximal(cfg.function, cfg.level, cfg.seed, cfg.lattices, false);
  const GridFunction& mw = c.hl_maximal(cfg.weight, cfg.level, cfg.seed, cfg.lattices, true);
  const double integral = integrate_abs_product(*in.f, mw);
  return level_set_reports("fs", cfg, false, false, in, mf, start,
                           [&](double t) { return integral / t; });
}

std::vector<RatioReport> run_perez_ratio(const ExperimentConfig& cfg, ExperimentCache* cache) {
  ExperimentCache local;
  ExperimentCache& c = cache ? *cache : local;
  const auto start = Clock::now();
  const Inputs in = load_inputs(cfg, c);
  const GridFunction g = model_output(cfg, c, in);
  const GridFunction& bump = c.orlicz_maximal(cfg.weight, cfg.level, cfg.seed, YoungFunction::llogl(cfg.rho),
                                              cfg.lattices, cfg.tol);
  const double integral = integrate_abs_product(*in.f, bump);
  return level_set_reports("perez", cfg, false, false, in, g, start,
                           [&](double t) { return integral / t; });
}

std::vector<RatioReport> run_rahm_ratio(const ExperimentConfig& cfg, ExperimentCache* cache) {
  ExperimentCache local;
  ExperimentCache& c = cache ? *cache : local;
  const auto start = Clock::now();
  const Inputs in = load_inputs(cfg, c);
  const EpsilonFunction eps = EpsilonFunction::parse(cfg.epsilon);
  const GridFunction g = model_output(cfg, c, in);
  const EntropyTable& table = c.entropy_table(cfg.weight, cfg.level, cfg.seed, YoungFunction::power(1.0), 1,
                                              cfg.lattices, cfg.tol);
  const double integral = epsilon_series(eps, cfg.series_R) * integrate_abs_product(*in.f, table.maximal(eps));
  return level_set_reports("rahm", cfg, false, true, in, g, start,
                           [&](double t) { return integral / t; });
}

RatioReport run_tmbs_weak(const ExperimentConfig& cfg, ExperimentCache* cache) {
  ExperimentCache local;
  ExperimentCache& c = cache ? *cache : local;
  const auto start = Clock::now();
  if (cfg.m < 1) throw ConfigError("tmbs needs m >= 1");
  const Inputs in = load_inputs(cfg, c);
  const EpsilonFunction eps = EpsilonFunction::parse(cfg.epsilon);
  const BmoSymbol& symbol = c.symbol(cfg.bmo, cfg.level);

  GridFunction g = GridFunction::zeros(cfg.level);
  if (in.abs_f.is_weight() && symbol.norm() > 0.0) {
    const CarlesonFamily& s = commutator_family(cfg, c);
    g = sparse_commutator_apply(s, symbol.normalized().values(), in.abs_f, cfg.m, cfg.m);
  }
  const auto [lhs, t_star] = cfg.exact_weak ? weak_norm_exact(g, *in.w)
                                            : weak_norm_on_grid(g, *in.w, cfg.t_grid.values(in.base));
  const EntropyTable& table = c.entropy_table(cfg.weight, cfg.level, cfg.seed, YoungFunction::phi_k(cfg.m),
                                              cfg.m + 1, cfg.lattices, cfg.tol);
  const double rhs = epsilon_series(eps, cfg.series_R) * integrate_abs_product(*in.f, table.maximal(eps));
  RatioReport r = make_report("tmbs", cfg, true, true, t_star, lhs, rhs);
  r.wall_ms = elapsed_ms(start);
  return r;
}

std::vector<RatioReport> run_t0m_ratio(const ExperimentConfig& cfg, ExperimentCache* cache) {
  ExperimentCache local;
  ExperimentCache& c = cache ? *cache : local;
  const auto start = Clock::now();
  if (cfg.m < 1) throw ConfigError("t0m needs m >= 1");
  const Inputs in = load_inputs(cfg, c);
  const BmoSymbol& symbol = c.symbol(cfg.bmo, cfg.level);

  GridFunction g = GridFunction::zeros(cfg.level);
  if (in.abs_f.is_weight() && symbol.norm() > 0.0)
    g = sparse_commutator_apply(commutator_family(cfg, c), symbol.values(), in.abs_f, 0, cfg.m);
  const GridFunction& bump = c.orlicz_maximal(cfg.weight, cfg.level, cfg.seed, YoungFunction::phi_k(cfg.m),
                                              cfg.lattices, cfg.tol);
  const double scale = std::pow(symbol.norm(), cfg.m);
  return level_set_reports("t0m", cfg, true, false, in, g, start,
                           [&](double t) { return integrate_phi(in.abs_f, scale, t, cfg.m, bump); });
}

std::vector<RatioReport> run_main_theorem(const ExperimentConfig& cfg, ExperimentCache* cache) {
  ExperimentCache local;
  ExperimentCache& c = cache ? *cache : local;
  const auto start = Clock::now();
  if (cfg.m < 1) throw ConfigError("main needs m >= 1");
  const Inputs in = load_inputs(cfg, c);
  const EpsilonFunction eps = EpsilonFunction::parse(cfg.epsilon);
  const BmoSymbol& symbol = c.symbol(cfg.bmo, cfg.level);

  GridFunction g = GridFunction::zeros(cfg.level);
  if (cfg.mode == CommutatorMode::Direct) {
    g = iterated_commutator(symbol.values(), in.abs_f, SignPattern::alternating(), cfg.m).abs();
  } else if (in.abs_f.is_weight() && symbol.norm() > 0.0) {
    g = sparse_commutator_sum(commutator_family(cfg, c), symbol.values(), in.abs_f, cfg.m);
  }
  const EntropyTable& table = c.entropy_table(cfg.weight, cfg.level, cfg.seed, YoungFunction::phi_k(cfg.m),
                                              cfg.m + 1, cfg.lattices, cfg.tol);
  const GridFunction bump = table.maximal(eps);
  const double series = epsilon_series(eps, cfg.series_R);
  const double scale = std::pow(symbol.norm(), cfg.m);
  return level_set_reports(cfg.mode == CommutatorMode::Direct ? "main-direct" : "main", cfg, true, true,
                           in, g, start,
                           [&](double t) { return series * integrate_phi(in.abs_f, scale, t, cfg.m, bump); });
}

RatioReport run_domination(const ExperimentConfig& cfg, ExperimentCache* cache) {
  ExperimentCache local;
  ExperimentCache& c = cache ? *cache : local;
  const auto start = Clock::now();
  const Inputs in = load_inputs(cfg, c);
  const BmoSymbol& symbol = c.symbol(cfg.bmo, cfg.level);
  DominationReport d;
  if (in.abs_f.is_weight())
    d = pointwise_domination_check(symbol.values(), in.abs_f, SignPattern::alternating(), cfg.m);
  RatioReport r = make_report("domination", cfg, true, false, 0.0, d.constant, 1.0);
  r.wall_ms = elapsed_ms(start);
  return r;
}

bool experiment_uses_symbol(std::string_view name) {
  return name == "tmbs" || name == "t0m" || name == "main" || name == "main-direct" || name == "domination";
}

bool experiment_uses_epsilon(std::string_view name) {
  return name == "rahm" || name == "tmbs" || name == "main" || name == "main-direct";
}

std::vector<RatioReport> run_experiment(std::string_view name, const ExperimentConfig& cfg,
                                        ExperimentCache* cache) {
  if (name == "fs") return run_fs_ratio(cfg, cache);
  if (name == "perez") return run_perez_ratio(cfg, cache);
  if (name == "rahm") return run_rahm_ratio(cfg, cache);
  if (name == "tmbs") return {run_tmbs_weak(cfg, cache)};
  if (name == "t0m") return run_t0m_ratio(cfg, cache);
  if (name == "main") return run_main_theorem(cfg, cache);
  if (name == "main-direct") {
    ExperimentConfig direct = cfg;
    direct.mode = CommutatorMode::Direct;
    return run_main_theorem(direct, cache);
  }
  if (name == "domination") return {run_domination(cfg, cache)};
  throw UsageError("unknown experiment `" + std::string(name) + "`");
}

}  // namespace efs
