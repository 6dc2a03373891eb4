#include "entropy_fs/properties.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "entropy_fs/bmo.hpp"
#include "entropy_fs/grid.hpp"
#include "entropy_fs/harness.hpp"
#include "entropy_fs/maximal.hpp"
#include "entropy_fs/orlicz.hpp"
#include "entropy_fs/rng.hpp"
#include "entropy_fs/sparse.hpp"
#include "entropy_fs/specs.hpp"
#include "entropy_fs/sweep.hpp"

namespace efs::properties {
namespace {

using Clock = std::chrono::steady_clock;
using json = nlohmann::ordered_json;
constexpr double kE = std::numbers::e;
constexpr std::size_t kMaxFindings = 12;

std::string fmt(double v) { return format_number(v); }

double rel_err(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

/// Uniform integer in [0, n).
std::size_t pick(std::uint64_t h, std::size_t n) {
  return static_cast<std::size_t>(unit_interval(h) * static_cast<double>(n)) % n;
}

/// Seeded random cube with at least `min_cells` cells.
DyadicCube random_cube(std::uint64_t seed, std::uint64_t i, int J, std::size_t min_cells = 1) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    const std::uint64_t h = hash_coords(seed, i, attempt);
    const int lattice = static_cast<int>(pick(splitmix64(h ^ 1), 3));
    const int level = static_cast<int>(pick(splitmix64(h ^ 2), static_cast<std::size_t>(J) + 1));
    const auto index = static_cast<std::int64_t>(pick(splitmix64(h ^ 3), std::size_t{1} << level));
    const DyadicCube q{lattice, level, index};
    if (cell_range(q, J).size() >= min_cells) return q;
  }
}

/// Seeded test function of one of several shapes.
GridFunction random_function(std::uint64_t seed, std::uint64_t i, int J) {
  const std::size_t n = std::size_t{1} << J;
  std::vector<double> v(n);
  const std::uint64_t s = hash_coords(seed, i, 0xF);
  const int shape = static_cast<int>(i % 4);
  for (std::size_t c = 0; c < n; ++c) {
    const double u = unit_interval(hash_coords(s, c));
    switch (shape) {
      case 0: v[c] = std::exp(2.0 * hashed_normal(s, c)); break;
      case 1: v[c] = u; break;
      case 2: v[c] = u < 0.9 ? 0.0 : 100.0 * u; break;
      default: v[c] = std::log(static_cast<double>(n) / (static_cast<double>(c) + 0.5)); break;
    }
  }
  return GridFunction(J, std::move(v));
}

double p_mean(std::span<const double> x, int p) {
  long double acc = 0.0L;
  for (double v : x) acc += std::pow(static_cast<long double>(std::abs(v)), p);
  return static_cast<double>(std::pow(acc / x.size(), 1.0L / p));
}

double phik(double t, int k) { return t * std::pow(std::log(kE + t), k); }

/// Subsets E ⊊ Q of a cube with n >= 2 cells: first half uniformly random,
/// second half the heaviest cells on a geometric ladder of sizes.
class SubsetSampler {
 public:
  SubsetSampler(std::span<const double> cells, int count, std::uint64_t seed)
      : cells_(cells), count_(count), seed_(seed), order_(cells.size()) {
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) { return cells_[a] > cells_[b]; });
    scratch_ = order_;
  }

  /// Values of w on the i-th subset.
  std::span<const double> subset(int i) {
    const std::size_t n = cells_.size();
    values_.clear();
    const int random_count = count_ / 2;
    if (i < random_count) {
      const std::uint64_t h = hash_coords(seed_, static_cast<std::uint64_t>(i));
      const std::size_t s = 1 + pick(h, n - 1);
      for (std::size_t j = 0; j < n; ++j) scratch_[j] = j;
      for (std::size_t j = 0; j < s; ++j) {
        const std::size_t k = j + pick(hash_coords(h, j), n - j);
        std::swap(scratch_[j], scratch_[k]);
        values_.push_back(cells_[scratch_[j]]);
      }
    } else {
      const int ladder = count_ - random_count;
      const double frac = static_cast<double>(i - random_count + 1) / static_cast<double>(ladder);
      auto s = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(n - 1), frac)));
      s = std::clamp<std::size_t>(s, 1, n - 1);
      for (std::size_t j = 0; j < s; ++j) values_.push_back(cells_[order_[j]]);
    }
    return values_;
  }

 private:
  std::span<const double> cells_;
  int count_;
  std::uint64_t seed_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> scratch_;
  std::vector<double> values_;
};

double sum(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s;
}

json drift_record(const std::map<int, double>& per_level) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& [J, v] : per_level) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double factor = lo > 0.0 ? hi / lo : (hi > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
  json per = json::object();
  for (const auto& [J, v] : per_level) per[std::to_string(J)] = v;
  return {{"per_level", per}, {"drift_factor", std::isfinite(factor) ? json(factor) : json("inf")}};
}

double drift_factor(const std::map<int, double>& per_level) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& [J, v] : per_level) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo > 0.0) return hi / lo;
  return hi > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
}

}  // namespace

void PropertyResult::violation(const std::string& what) {
  ++violations;
  passed = false;
  if (findings.size() < kMaxFindings) findings.push_back(what);
}

void PropertyResult::finding(const std::string& what) {
  if (findings.size() < kMaxFindings) findings.push_back(what);
}

json PropertyResult::to_json() const {
  return {{"name", name},         {"passed", passed},   {"checked", checked},
          {"violations", violations}, {"seconds", seconds}, {"findings", findings},
          {"record", record}};
}

PropertyResult timed(const std::function<PropertyResult()>& run) {
  const auto start = Clock::now();
  PropertyResult r = run();
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

// ---------------------------------------------------------------------------

PropertyResult luxemburg_oracle(int level, int pairs, std::uint64_t seed) {
  PropertyResult r;
  r.name = "luxemburg_oracle";
  double worst = 0.0, worst_ind = 0.0;
  const std::vector<YoungFunction> indicator_kinds = {
      YoungFunction::power(1), YoungFunction::power(2), YoungFunction::power(3), YoungFunction::phi_k(1),
      YoungFunction::phi_k(2), YoungFunction::llogl(0.5), YoungFunction::exp_pow(1.0)};
  for (int i = 0; i < pairs; ++i) {
    const GridFunction f = random_function(seed, static_cast<std::uint64_t>(i), level);
    const DyadicCube q = random_cube(seed, static_cast<std::uint64_t>(i), level);
    const auto cells = restrict_to(f, q);
    if (sum(cells) == 0.0) continue;
    for (int p = 1; p <= 3; ++p) {
      const double got = luxemburg_norm(f, q, YoungFunction::power(p));
      const double want = p_mean(cells, p);
      const double e = rel_err(got, want);
      worst = std::max(worst, e);
      ++r.checked;
      if (!(e <= 1e-9))
        r.violation("L^" + std::to_string(p) + " on " + to_string(q) + ": bisection " + fmt(got) + " vs " + fmt(want));
    }
    // indicator of a random subset of Q
    const std::size_t n = cells.size();
    const std::uint64_t h = hash_coords(seed, static_cast<std::uint64_t>(i), 0x1D);
    const std::size_t s = 1 + pick(h, n);
    std::vector<double> chi(n, 0.0);
    for (std::size_t j = 0; j < s; ++j) chi[j] = 1.0;
    const auto& a = indicator_kinds[static_cast<std::size_t>(i) % indicator_kinds.size()];
    const double got = luxemburg_norm(chi, a);
    const double want = indicator_norm(a, static_cast<double>(n) / static_cast<double>(s));
    const double e = rel_err(got, want);
    worst_ind = std::max(worst_ind, e);
    ++r.checked;
    if (!(e <= 1e-9))
      r.violation("indicator " + a.to_string() + " |Q|/|E| = " + std::to_string(n) + "/" + std::to_string(s) +
                  ": " + fmt(got) + " vs " + fmt(want));
  }
  r.record = {{"level", level}, {"pairs", pairs}, {"max_rel_err_power", worst}, {"max_rel_err_indicator", worst_ind}};
  return r;
}

PropertyResult generalized_holder(int level, int pairs, std::uint64_t seed) {
  PropertyResult r;
  r.name = "generalized_holder";
  json rec = json::object();
  for (int m = 1; m <= 2; ++m) {
    const YoungFunction a = YoungFunction::phi_k(m);
    const YoungFunction b = YoungFunction::exp_pow(1.0 / m);
    double worst = 0.0;
    for (int i = 0; i < pairs; ++i) {
      const auto id = static_cast<std::uint64_t>(i);
      const GridFunction f = random_function(seed + 100 * m, 2 * id, level);
      const GridFunction g = random_function(seed + 100 * m, 2 * id + 1 + (id % 3), level);
      const DyadicCube q = random_cube(seed + 100 * m, id, level);
      const auto fc = restrict_to(f, q);
      const auto gc = restrict_to(g, q);
      double lhs = 0.0;
      for (std::size_t c = 0; c < fc.size(); ++c) lhs += std::abs(fc[c] * gc[c]);
      lhs /= static_cast<double>(fc.size());
      const double nf = luxemburg_norm(fc, a), ng = luxemburg_norm(gc, b);
      ++r.checked;
      if (nf * ng > 0.0) worst = std::max(worst, lhs / (nf * ng));
      if (!(lhs <= 2.0 * nf * ng + 1e-9))
        r.violation("m=" + std::to_string(m) + " pair " + std::to_string(i) + ": " + fmt(lhs) + " > 2·" +
                    fmt(nf) + "·" + fmt(ng));
    }
    rec["m" + std::to_string(m) + "_max_ratio"] = worst;
  }
  rec["pairs_per_m"] = pairs;
  r.record = rec;
  return r;
}

PropertyResult submultiplicativity(int grid) {
  PropertyResult r;
  r.name = "submultiplicativity";
  std::vector<double> pts(static_cast<std::size_t>(grid));
  for (int i = 0; i < grid; ++i) pts[static_cast<std::size_t>(i)] = std::pow(10.0, -3.0 + 6.0 * i / (grid - 1));
  for (int k = 1; k <= 3; ++k) {
    double best = 0.0;
    for (double a : pts)
      for (double b : pts) {
        const double lhs = phik(a * b, k);
        const double rhs = phik(a, k) * phik(b, k);
        ++r.checked;
        best = std::max(best, lhs / rhs);
        if (!(lhs <= std::ldexp(rhs, k)))
          r.violation("k=" + std::to_string(k) + " a=" + fmt(a) + " b=" + fmt(b));
      }
    r.record["k" + std::to_string(k) + "_empirical_constant"] = best;
  }
  return r;
}

PropertyResult entropy_density(const std::vector<int>& levels) {
  PropertyResult r;
  r.name = "entropy_density";
  const auto& weights = default_corpus().weights;
  constexpr int kMaxK = 4;
  double min_rho = std::numeric_limits<double>::infinity(), worst_scale = 0.0;
  for (int J : levels)
    for (const auto& spec : weights) {
      const GridFunction w = make_weight(spec, J, 1);
      const GridFunction w7 = w.affine(7.0);
      std::vector<double> prev;
      for (int k = 0; k <= kMaxK; ++k) {
        const EntropyTable t(w, YoungFunction::power(1), k, kAllLattices);
        const EntropyTable t7(w7, YoungFunction::power(1), k, kAllLattices);
        const auto& es = t.entries();
        for (std::size_t i = 0; i < es.size(); ++i) {
          const double rho = es[i].rho, rho7 = t7.entries()[i].rho;
          const std::string where = spec + " J=" + std::to_string(J) + " k=" + std::to_string(k) + " " + to_string(es[i].cube);
          r.checked += 2;
          min_rho = std::min(min_rho, rho);
          if (!(rho >= 1.0 - 1e-9)) r.violation("ρ_k < 1: " + where + " ρ=" + fmt(rho));
          const double se = rel_err(rho, rho7);
          worst_scale = std::max(worst_scale, se);
          if (!(se <= 1e-9)) r.violation("scale: " + where + " " + fmt(rho) + " vs " + fmt(rho7));
          if (k > 0) {
            ++r.checked;
            if (!(rho >= prev[i] - 1e-9))
              r.violation("monotone in k: " + where + " " + fmt(rho) + " < " + fmt(prev[i]));
          }
        }
        prev.resize(es.size());
        for (std::size_t i = 0; i < es.size(); ++i) prev[i] = es[i].rho;
      }
      // ρ_w scale invariance on the same cubes
      for (const auto& q : enumerate_cubes(J, kAllLattices)) {
        if (cell_range(q, J).empty()) continue;
        ++r.checked;
        const double a = rho_rahm(w, q), b = rho_rahm(w7, q);
        if (!(rel_err(a, b) <= 1e-9)) r.violation("ρ_w scale: " + spec + " " + to_string(q));
      }
    }
  r.record = {{"levels", levels}, {"k_max", kMaxK}, {"min_rho", min_rho}, {"max_scale_rel_err", worst_scale}};
  return r;
}

PropertyResult rahm_equivalence(const std::vector<int>& levels) {
  PropertyResult r;
  r.name = "rahm_equivalence";
  std::map<int, double> width;
  json per = json::object();
  for (int J : levels) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& spec : default_corpus().weights) {
      const GridFunction w = make_weight(spec, J, 1);
      const EntropyTable t(w, YoungFunction::power(1), 1, kAllLattices);
      for (const auto& e : t.entries()) {
        if (e.cells.empty() || !(e.bump_average > 0.0)) continue;
        const double q = rho_rahm(w, e.cube) / e.rho;
        ++r.checked;
        lo = std::min(lo, q);
        hi = std::max(hi, q);
      }
    }
    width[J] = std::max(hi, 1.0 / lo);
    per[std::to_string(J)] = {{"min", lo}, {"max", hi}, {"C", width[J]}};
  }
  const double drift = drift_factor(width);
  r.record = {{"intervals", per}, {"C_drift_factor", drift}};
  if (!(drift < 2.0)) r.violation("ρ_w/ρ_{1,w} interval drifts by " + fmt(drift));
  return r;
}

PropertyResult entropy_integral_equivalence(const std::vector<int>& levels) {
  PropertyResult r;
  r.name = "entropy_integral_equivalence";
  json rec = json::object();
  for (int k = 1; k <= 2; ++k) {
    std::map<int, double> width;
    json per = json::object();
    for (int J : levels) {
      double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
      for (const auto& spec : default_corpus().weights) {
        const GridFunction w = make_weight(spec, J, 1);
        for (const auto& q : enumerate_cubes(J, kAllLattices)) {
          const auto cells = restrict_to(w, q);
          if (cells.empty() || !(sum(cells) > 0.0)) continue;
          const double v = luxemburg_norm(cells, YoungFunction::phi_k(k)) / entropy_integral(w, q, k);
          ++r.checked;
          if (!std::isfinite(v) || !(v > 0.0)) r.violation("degenerate ratio on " + spec + " " + to_string(q));
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      }
      width[J] = std::max(hi, 1.0 / lo);
      per[std::to_string(J)] = {{"min", lo}, {"max", hi}, {"C", width[J]}};
    }
    const double drift = drift_factor(width);
    rec["k" + std::to_string(k)] = {{"intervals", per}, {"C_drift_factor", drift}};
    if (!(drift < 2.0)) r.violation("k=" + std::to_string(k) + ": C_k drifts by " + fmt(drift));
  }
  r.record = rec;
  return r;
}

PropertyResult exp_norm_duality(int level) {
  PropertyResult r;
  r.name = "exp_norm_duality";
  json rec = json::object();
  for (int m = 1; m <= 2; ++m) {
    double best = 0.0;
    std::string where;
    for (const auto& spec : default_corpus().symbols) {
      const GridFunction b = generate_symbol(SymbolSpec::parse(spec), level);
      const double norm = dyadic_bmo_norm(b);
      if (!(norm > 0.0)) continue;
      for (const auto& q : enumerate_cubes(level, kBaseLattice)) {
        const double v = oscillation_exp_norm(b, q, m) / std::pow(norm, m);
        ++r.checked;
        if (!std::isfinite(v)) r.violation("non-finite exp norm on " + spec + " " + to_string(q));
        if (v > best) {
          best = v;
          where = spec + " " + to_string(q);
        }
      }
    }
    rec["m" + std::to_string(m)] = {{"sup", best}, {"argmax", where}};
  }
  rec["level"] = level;
  r.record = rec;
  return r;
}

PropertyResult subset_rho_bound(int level, int subsets, std::uint64_t seed) {
  PropertyResult r;
  r.name = "subset_rho_bound";
  double worst = 0.0;
  std::string argmax;
  for (const auto& spec : default_corpus().weights) {
    const GridFunction w = make_weight(spec, level, 1);
    for (const auto& q : enumerate_cubes(level, kAllLattices)) {
      const auto cells = restrict_to(w, q);
      const std::size_t n = cells.size();
      if (n < 2) continue;
      const double wq = sum(cells);
      if (!(wq > 0.0)) continue;
      const double rho = rho_rahm(w, q);
      SubsetSampler sampler(cells, subsets, hash_coords(seed, static_cast<std::uint64_t>(q.lattice),
                                                        (static_cast<std::uint64_t>(q.level) << 32) ^ static_cast<std::uint64_t>(q.index)));
      for (int i = 0; i < subsets; ++i) {
        const auto e = sampler.subset(i);
        const double we = sum(e);
        const double lg = std::log(static_cast<double>(n) / static_cast<double>(e.size()));
        ++r.checked;
        const double c = we * lg / (rho * wq);
        if (c > worst) {
          worst = c;
          argmax = spec + " " + to_string(q) + " |E|=" + std::to_string(e.size());
        }
        if (!(we * lg <= 16.0 * rho * wq))
          r.violation(spec + " " + to_string(q) + " |E|=" + std::to_string(e.size()) + ": w(E)=" + fmt(we));
      }
    }
  }
  r.record = {{"level", level}, {"subsets_per_cube", subsets}, {"empirical_constant", worst}, {"bound", 16}, {"argmax", argmax}};
  return r;
}

PropertyResult subset_entropy_constant(int level_lo, int level_hi, int subsets, std::uint64_t seed) {
  PropertyResult r;
  r.name = "subset_entropy_constant";
  json rec = json::object();
  for (int k = 1; k <= 2; ++k) {
    std::map<int, double> sup;
    json arg = json::object();
    for (int J : {level_lo, level_hi}) {
      double best = 0.0;
      std::string where;
      const YoungFunction a = YoungFunction::phi_k(k), b = YoungFunction::phi_k(k + 1);
      for (const auto& spec : default_corpus().weights) {
        const GridFunction w = make_weight(spec, J, 1);
        for (const auto& q : enumerate_cubes(J, kAllLattices)) {
          const auto cells = restrict_to(w, q);
          const std::size_t n = cells.size();
          if (n < 2) continue;
          const double den_norm = luxemburg_norm(cells, b);
          if (!(den_norm > 0.0)) continue;
          SubsetSampler sampler(cells, subsets, hash_coords(seed, static_cast<std::uint64_t>(q.lattice),
                                                            (static_cast<std::uint64_t>(q.level) << 32) ^ static_cast<std::uint64_t>(q.index)));
          for (int i = 0; i < subsets; ++i) {
            const auto e = sampler.subset(i);
            const double lg = std::log(static_cast<double>(n) / static_cast<double>(e.size()));
            const double num = luxemburg_norm_padded(e, n, a) * lg;
            const double den = std::pow(std::log(kE + lg), k) * den_norm;
            const double c = num / den;
            ++r.checked;
            if (!std::isfinite(c)) r.violation("non-finite ratio at " + spec + " " + to_string(q));
            if (c > best) {
              best = c;
              where = spec + " " + to_string(q) + " |E|=" + std::to_string(e.size());
            }
          }
        }
      }
      sup[J] = best;
      arg[std::to_string(J)] = where;
    }
    const double drift = drift_factor(sup);
    json entry = drift_record(sup);
    entry["argmax"] = arg;
    rec["k" + std::to_string(k)] = entry;
    if (!(drift < 2.0)) r.violation("k=" + std::to_string(k) + ": c_emp drifts by " + fmt(drift));
  }
  rec["subsets_per_cube"] = subsets;
  r.record = rec;
  return r;
}

PropertyResult john_nirenberg(int level) {
  PropertyResult r;
  r.name = "john_nirenberg";
  const std::vector<double> mults = {0.5, 1, 2, 4, 8};
  json rec = json::object();
  std::size_t bound_violations = 0;
  for (const auto& spec : default_corpus().symbols) {
    const GridFunction b = generate_symbol(SymbolSpec::parse(spec), level);
    const double norm = dyadic_bmo_norm(b);
    if (!(norm > 0.0)) continue;
    std::vector<double> worst(mults.size(), 0.0);
    for (const auto& q : enumerate_cubes(level, kBaseLattice)) {
      const double mq = clipped_measure(q, level);
      for (std::size_t i = 0; i < mults.size(); ++i) {
        const double frac = oscillation_level_measure(b, q, mults[i] * norm) / mq;
        worst[i] = std::max(worst[i], frac);
        ++r.checked;
        if (frac > kE * std::exp(-mults[i] / (2.0 * kE))) {
          ++bound_violations;
          r.finding(spec + " " + to_string(q) + " λ=" + fmt(mults[i]) + "‖b‖: fraction " + fmt(frac) +
                    " above e·e^{-λ/(2e‖b‖)}");
        }
        if (frac > kE * std::exp(-mults[i] / (8.0 * kE)))
          r.violation(spec + " " + to_string(q) + " λ=" + fmt(mults[i]) + "‖b‖: fraction " + fmt(frac) +
                      " above e·e^{-λ/(8e‖b‖)}");
      }
    }
    // least-squares slope of log(max fraction) against λ/‖b‖
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int npts = 0;
    for (std::size_t i = 0; i < mults.size(); ++i) {
      if (!(worst[i] > 0.0)) continue;
      const double x = mults[i], y = std::log(worst[i]);
      sx += x, sy += y, sxx += x * x, sxy += x * y, ++npts;
    }
    json slope = nullptr;
    if (npts >= 2) slope = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
    rec[spec] = {{"dyadic_norm", norm}, {"lambda_over_norm", mults}, {"max_fraction", worst}, {"decay_slope", slope}};
  }
  rec["stated_bound_violations"] = bound_violations;
  r.record = rec;
  return r;
}

PropertyResult sparse_exactness(const std::vector<int>& levels, int t_max) {
  PropertyResult r;
  r.name = "sparse_exactness";
  using boost::multiprecision::cpp_int;
  std::vector<std::string> inputs = default_corpus().functions;
  inputs.push_back("power:0.9");
  inputs.push_back("lognormal");
  const std::vector<int> ratios = {2, 3, 5, 113};
  std::size_t families = 0, decompositions = 0;
  double max_alpha_excess = 0.0;
  for (int J : levels)
    for (const auto& spec : inputs) {
      const GridFunction f = make_grid_function(spec, J, 1).abs();
      for (int ratio : ratios) {
        const CarlesonFamily s = build_sparse_from_function(f, ratio);
        const Rational alpha = carleson_constant(s.cubes());
        ++families;
        ++r.checked;
        const std::string where = spec + " J=" + std::to_string(J) + " ratio=" + std::to_string(ratio);
        max_alpha_excess = std::max(max_alpha_excess, alpha.value() * (ratio - 1) / ratio);
        if (cpp_int(alpha.num) * (ratio - 1) > cpp_int(alpha.den) * ratio)
          r.violation(where + ": α = " + std::to_string(alpha.num) + "/" + std::to_string(alpha.den));

        std::vector<std::vector<DyadicCube>> bands = {s.cubes()};
        for (const auto& w_spec : {std::string("const"), std::string("power:0.6")}) {
          const GridFunction w = make_weight(w_spec, J, 1);
          for (int m = 1; m <= 2; ++m) {
            const Stratification st = stratify(s, f, w, m);
            std::vector<DyadicCube> all = st.out_of_band;
            all.insert(all.end(), st.zero_average.begin(), st.zero_average.end());
            for (const auto& [k, v] : st.s1) {
              all.insert(all.end(), v.begin(), v.end());
              bands.push_back(v);
            }
            for (const auto& [rk, v] : st.s2) {
              all.insert(all.end(), v.begin(), v.end());
              bands.push_back(v);
            }
            std::sort(all.begin(), all.end());
            std::vector<DyadicCube> want = s.cubes();
            std::sort(want.begin(), want.end());
            ++r.checked;
            if (all != want || st.total() != s.size())
              r.violation(where + " w=" + w_spec + " m=" + std::to_string(m) + ": stratification is not a partition");
          }
        }
        for (const auto& band : bands) {
          if (band.empty()) continue;
          for (int t = 1; t <= t_max; ++t) {
            const auto check = stopping_decomposition(band, J, t).verify();
            ++decompositions;
            ++r.checked;
            if (!check.ok())
              r.violation(where + " t=" + std::to_string(t) + " band of " + std::to_string(band.size()) +
                          ": identity " + std::to_string(check.stopping_identity) + " overlap " +
                          std::to_string(check.max_overlap) + " decay " + std::to_string(check.layer_decay));
          }
        }
      }
    }
  r.record = {{"levels", levels}, {"families", families}, {"decompositions", decompositions},
              {"t_max", t_max}, {"max_alpha_over_bound", max_alpha_excess}};
  return r;
}

PropertyResult reduction_inequality(int level) {
  PropertyResult r;
  r.name = "reduction_inequality";
  const auto& corpus = default_corpus();
  double slack = std::numeric_limits<double>::infinity();
  for (const auto& f_spec : corpus.functions) {
    const GridFunction f = make_grid_function(f_spec, level, 1).abs();
    if (!f.is_weight()) continue;
    for (int ratio : {2, 113}) {
      const CarlesonFamily s = build_sparse_from_function(f, ratio);
      for (const auto& b_spec : corpus.symbols) {
        const GridFunction b = generate_symbol(SymbolSpec::parse(b_spec), level);
        for (int m = 1; m <= 2; ++m) {
          const GridFunction tmm = sparse_commutator_apply(s, b, f, m, m);
          const GridFunction t0m = sparse_commutator_apply(s, b, f, 0, m);
          for (int h = 0; h <= m; ++h) {
            const GridFunction th = sparse_commutator_apply(s, b, f, h, m);
            for (std::size_t c = 0; c < th.size(); ++c) {
              ++r.checked;
              const double gap = tmm[c] + t0m[c] - th[c];
              slack = std::min(slack, gap);
              if (!(th[c] <= tmm[c] + t0m[c] + 1e-9))
                r.violation(f_spec + " " + b_spec + " m=" + std::to_string(m) + " h=" + std::to_string(h) +
                            " cell " + std::to_string(c) + ": " + fmt(th[c]) + " > " + fmt(tmm[c] + t0m[c]));
            }
          }
        }
      }
    }
  }
  r.record = {{"level", level}, {"min_gap", slack}};
  return r;
}

namespace {

struct CorpusMax {
  double value = 0.0;
  std::string where;
};

json corpus_max_json(const std::map<int, CorpusMax>& per_level) {
  json out = json::object();
  for (const auto& [J, c] : per_level) out[std::to_string(J)] = {{"max_ratio", c.value}, {"argmax", c.where}};
  return out;
}

template <class Run>
void theorem_sweep(PropertyResult& r, const std::vector<int>& levels, int m, Run&& run,
                   std::map<int, CorpusMax>& per_level) {
  const auto& corpus = default_corpus();
  for (int J : levels) {
    ExperimentCache cache;
    CorpusMax best;
    for (const auto& eps : {std::string("logpow:1"), std::string("pow:1")})
      for (const auto& w : corpus.weights)
        for (const auto& f : corpus.functions)
          for (const auto& b : corpus.symbols) {
            ExperimentConfig cfg;
            cfg.level = J;
            cfg.m = m;
            cfg.weight = w;
            cfg.function = f;
            cfg.bmo = b;
            cfg.epsilon = eps;
            cfg.series_R = 20;
            cfg.exact_weak = true;
            for (const auto& row : run(cfg, cache)) {
              ++r.checked;
              const std::string where = "J=" + std::to_string(J) + " " + w + " " + f + " " + b + " " + eps;
              if (row.infinite || !std::isfinite(row.ratio)) {
                r.violation("infinite ratio: " + where + " t=" + fmt(row.t));
                continue;
              }
              if (row.ratio > best.value) best = {row.ratio, where + " t=" + fmt(row.t)};
            }
          }
    per_level[J] = best;
  }
}

void record_drift(PropertyResult& r, const std::map<int, CorpusMax>& per_level, int lo, int mid, int hi) {
  std::map<int, double> ends = {{lo, per_level.at(lo).value}, {hi, per_level.at(hi).value}};
  const double drift = drift_factor(ends);
  r.record["corpus_max"] = corpus_max_json(per_level);
  r.record["recorded_max"] = per_level.at(mid).value;
  r.record["drift_factor"] = std::isfinite(drift) ? json(drift) : json("inf");
  if (!(drift < 2.0))
    r.violation("corpus max drifts by " + fmt(drift) + " between J=" + std::to_string(lo) + " and J=" +
                std::to_string(hi));
}

}  // namespace

PropertyResult tmbs_theorem(int level_lo, int level_mid, int level_hi, int m) {
  PropertyResult r;
  r.name = "tmbs_theorem";
  std::map<int, CorpusMax> per_level;
  theorem_sweep(r, {level_lo, level_mid, level_hi}, m,
                [](const ExperimentConfig& cfg, ExperimentCache& cache) {
                  return std::vector<RatioReport>{run_tmbs_weak(cfg, &cache)};
                },
                per_level);
  r.record["m"] = m;
  ExperimentConfig probe;
  probe.m = m;
  r.record["ratio"] = probe.commutator_ratio();
  record_drift(r, per_level, level_lo, level_mid, level_hi);
  return r;
}

PropertyResult main_theorem(int level_lo, int level_mid, int level_hi, int m) {
  PropertyResult r;
  r.name = "main_theorem";
  std::map<int, CorpusMax> per_level;
  theorem_sweep(r, {level_lo, level_mid, level_hi}, m,
                [](const ExperimentConfig& cfg, ExperimentCache& cache) { return run_main_theorem(cfg, &cache); },
                per_level);
  r.record["m"] = m;
  record_drift(r, per_level, level_lo, level_mid, level_hi);

  // mode (a): pointwise domination constant of the martingale commutator
  const auto& corpus = default_corpus();
  double worst = 0.0;
  std::string where;
  for (const auto& f_spec : corpus.functions) {
    const GridFunction f = make_grid_function(f_spec, level_mid, 1).abs();
    if (!f.is_weight()) continue;
    for (const auto& b_spec : corpus.symbols) {
      const GridFunction b = generate_symbol(SymbolSpec::parse(b_spec), level_mid);
      const DominationReport d = pointwise_domination_check(b, f, SignPattern::alternating(), m);
      ++r.checked;
      if (!std::isfinite(d.constant))
        r.violation("domination fails on " + std::to_string(d.infinite_cells) + " cells: " + f_spec + " " + b_spec);
      else if (d.constant > worst) {
        worst = d.constant;
        where = f_spec + " " + b_spec;
      }
    }
  }
  r.record["domination_constant"] = worst;
  r.record["domination_argmax"] = where;
  return r;
}

PropertyResult determinism(int level) {
  PropertyResult r;
  r.name = "determinism";
  SweepConfig cfg = SweepConfig::defaults();
  cfg.levels = {level};
  cfg.weights = {"const", "power:0.6", "lognormal"};
  cfg.functions = {"indicator", "random"};
  cfg.symbols = {"haar", "martingale:7:6"};
  cfg.epsilons = {"logpow:1", "pow:1"};
  cfg.base.t_grid = TGrid::parse("1e-2:1e2:8");
  std::string first, first_json;
  for (int run = 0; run < 2; ++run) {
    const auto rows = run_sweep(cfg);
    std::ostringstream csv;
    write_csv(csv, rows, false);
    const std::string js = summarize(rows).dump();
    ++r.checked;
    if (run == 0) {
      first = csv.str();
      first_json = js;
    } else {
      if (csv.str() != first) r.violation("CSV differs between runs");
      if (js != first_json) r.violation("JSON summary differs between runs");
    }
    r.record["rows"] = rows.size();
  }
  r.record["csv_bytes"] = first.size();
  return r;
}

}  // namespace efs::properties
