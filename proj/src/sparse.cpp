#include "entropy_fs/sparse.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>

#include "entropy_fs/errors.hpp"
#include "entropy_fs/maximal.hpp"
#include "entropy_fs/simd.hpp"

namespace efs {
namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::uint128_t;

std::uint64_t cube_key(int level, std::int64_t index) {
  return (static_cast<std::uint64_t>(level) << 48) | static_cast<std::uint64_t>(index);
}

std::uint64_t cube_key(const DyadicCube& q) { return cube_key(q.level, q.index); }

void require_single_lattice(std::span<const DyadicCube> cubes) {
  for (const auto& q : cubes)
    if (q.lattice != cubes.front().lattice)
      throw DomainError("Carleson family mixes lattices " + std::to_string(cubes.front().lattice) +
                        " and " + std::to_string(q.lattice));
}

}  // namespace

Rational Rational::reduced() const {
  const std::uint64_t g = std::gcd(num, den);
  return g ? Rational{num / g, den / g} : *this;
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<uint128_t>(a.num) * b.den < static_cast<uint128_t>(b.num) * a.den;
}

bool operator==(const Rational& a, const Rational& b) {
  return static_cast<uint128_t>(a.num) * b.den == static_cast<uint128_t>(b.num) * a.den;
}

Rational carleson_constant(std::span<const DyadicCube> cubes) {
  return carleson_constant_with_witness(cubes).first;
}

std::pair<Rational, DyadicCube> carleson_constant_with_witness(std::span<const DyadicCube> cubes) {
  if (cubes.empty()) throw DomainError("carleson_constant of an empty family");
  require_single_lattice(cubes);
  int finest = 0;
  for (const auto& q : cubes) finest = std::max(finest, q.level);
  if (finest > 62) throw DomainError("cube level too deep for exact Carleson sums");

  // measures in units of 2^-finest; each cube adds its measure to every
  // ancestor (and itself) that belongs to the family
  std::unordered_map<std::uint64_t, std::uint64_t> mass;
  mass.reserve(cubes.size() * 2);
  for (const auto& q : cubes) mass.emplace(cube_key(q), 0);
  for (const auto& q : cubes) {
    const std::uint64_t m = std::uint64_t{1} << (finest - q.level);
    for (int l = q.level; l >= 0; --l) {
      auto it = mass.find(cube_key(l, q.index >> (q.level - l)));
      if (it != mass.end()) it->second += m;
    }
  }
  Rational best{0, 1};
  DyadicCube witness = cubes.front();
  for (const auto& q : cubes) {
    const Rational r{mass.at(cube_key(q)), std::uint64_t{1} << (finest - q.level)};
    if (best < r) {
      best = r;
      witness = q;
    }
  }
  return {best.reduced(), witness};
}

CarlesonFamily CarlesonFamily::verified(std::vector<DyadicCube> cubes) {
  std::sort(cubes.begin(), cubes.end());
  cubes.erase(std::unique(cubes.begin(), cubes.end()), cubes.end());
  const Rational alpha = carleson_constant(cubes);
  return CarlesonFamily(std::move(cubes), alpha);
}

bool CarlesonFamily::contains(const DyadicCube& q) const {
  return std::binary_search(cubes_.begin(), cubes_.end(), q);
}

CarlesonFamily join(const CarlesonFamily& a, const CarlesonFamily& b) {
  std::vector<DyadicCube> all(a.cubes());
  all.insert(all.end(), b.cubes().begin(), b.cubes().end());
  return CarlesonFamily::verified(std::move(all));
}

void write_family(std::ostream& out, const CarlesonFamily& s) {
  std::ostringstream head;
  head.precision(17);
  head << "alpha=" << s.alpha();
  out << head.str() << '\n';
  for (const auto& q : s.cubes()) out << q.lattice << ' ' << q.level << ' ' << q.index << '\n';
}

CarlesonFamily read_family(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || !line.starts_with("alpha="))
    throw UsageError("family file: first line must be `alpha=<value>`");
  double declared = 0.0;
  try {
    declared = std::stod(line.substr(6));
  } catch (const std::exception&) {
    throw UsageError("family file: bad alpha in `" + line + "`");
  }
  std::vector<DyadicCube> cubes;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    DyadicCube q;
    std::string extra;
    if (!(ls >> q.lattice >> q.level >> q.index) || (ls >> extra) || q.lattice < 0 ||
        q.lattice > 2 || q.level < 0 || q.level > 62 || q.index < 0 ||
        q.index >= (std::int64_t{1} << q.level))
      throw UsageError("family file line " + std::to_string(line_no) + ": bad cube `" + line + "`");
    cubes.push_back(q);
  }
  if (cubes.empty()) throw UsageError("family file: no cubes");
  CarlesonFamily s = CarlesonFamily::verified(std::move(cubes));
  if (std::abs(s.alpha() - declared) > 1e-12 * s.alpha())
    throw UsageError("family file: declared alpha " + std::to_string(declared) +
                     " differs from verified " + std::to_string(s.alpha()));
  return s;
}

CarlesonFamily build_sparse_from_function(const GridFunction& f, double ratio) {
  if (!(ratio > 1.0)) throw DomainError("stopping ratio must exceed 1");
  bool nonzero = false;
  for (double v : f.cells()) {
    if (v < 0.0) throw DomainError("build_sparse_from_function needs f >= 0");
    nonzero = nonzero || v > 0.0;
  }
  if (!nonzero) throw DegenerateInputError("build_sparse_from_function: f vanishes identically");

  const std::size_t n = f.size();
  std::vector<double> sum(2 * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) sum[n + i] = f[i];
  for (std::size_t v = n - 1; v >= 1; --v) sum[v] = sum[2 * v] + sum[2 * v + 1];
  auto average = [&](std::size_t v) {
    const int level = std::bit_width(v) - 1;
    return sum[v] / static_cast<double>(n >> level);
  };

  std::vector<DyadicCube> selected{kUnitCube};
  // (node, average of the stopping cube it descends from)
  std::vector<std::pair<std::size_t, double>> stack;
  stack.emplace_back(2, average(1));
  stack.emplace_back(3, average(1));
  while (!stack.empty()) {
    const auto [v, parent_avg] = stack.back();
    stack.pop_back();
    const double a = average(v);
    double threshold_avg = parent_avg;
    if (a > ratio * parent_avg) {
      const int level = std::bit_width(v) - 1;
      selected.push_back({0, level, static_cast<std::int64_t>(v - (std::size_t{1} << level))});
      threshold_avg = a;
    }
    if (v < n) {
      stack.emplace_back(2 * v, threshold_avg);
      stack.emplace_back(2 * v + 1, threshold_avg);
    }
  }
  return CarlesonFamily::verified(std::move(selected));
}

int average_band(double avg, int m) {
  if (m < 1) throw DomainError("average_band needs m >= 1");
  if (!(avg > 0.0)) return -1;
  auto bound = [m](int k) { return std::pow(56.0, -static_cast<double>(m) * k); };
  if (avg > bound(1)) return 0;
  int k = std::max(1, static_cast<int>(std::floor(-std::log(avg) / (m * std::log(56.0)))));
  while (k > 1 && avg > bound(k)) --k;
  while (avg <= bound(k + 1)) ++k;
  return k;
}

int rho_band(double rho) {
  if (!(rho >= 2.0)) return -1;
  int r = std::max(0, static_cast<int>(std::floor(std::log2(std::log2(rho)))));
  auto low = [](int r_) { return std::exp2(std::exp2(r_)); };
  while (r > 0 && rho < low(r)) --r;
  while (rho >= low(r + 1)) ++r;
  return r;
}

std::vector<DyadicCube> Stratification::s1_cubes() const {
  std::vector<DyadicCube> out;
  for (const auto& [k, cubes] : s1) out.insert(out.end(), cubes.begin(), cubes.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t Stratification::total() const {
  std::size_t n = out_of_band.size() + zero_average.size();
  for (const auto& [k, cubes] : s1) n += cubes.size();
  for (const auto& [key, cubes] : s2) n += cubes.size();
  return n;
}

Stratification stratify(const CarlesonFamily& s, const GridFunction& f, const GridFunction& w,
                        int m, const ToleranceConfig& cfg) {
  if (m < 1) throw DomainError("stratify needs m >= 1");
  if (f.level() != w.level()) throw ResolutionError("stratify: f and w at different levels");
  Stratification out;
  out.m = m;
  for (const auto& q : s.cubes()) {
    const int k = average_band(cube_average(f, q), m);
    if (k < 0) {
      out.zero_average.push_back(q);
      continue;
    }
    if (k == 0) {
      out.out_of_band.push_back(q);
      continue;
    }
    const int r = rho_band(rho_k(w, q, m + 1, cfg));
    if (r < 0)
      out.s1[k].push_back(q);
    else
      out.s2[{r, k}].push_back(q);
  }
  return out;
}

StoppingDecomposition stopping_decomposition(std::span<const DyadicCube> band, int level_J, int t) {
  if (band.empty()) throw DomainError("stopping_decomposition of an empty band");
  if (t < 1) throw DomainError("stopping_decomposition needs t >= 1");
  std::vector<DyadicCube> cubes(band.begin(), band.end());
  std::sort(cubes.begin(), cubes.end());
  cubes.erase(std::unique(cubes.begin(), cubes.end()), cubes.end());
  for (const auto& q : cubes)
    if (q.lattice != 0) throw DomainError("stopping_decomposition works on lattice 0");

  StoppingDecomposition out;
  out.level = level_J;
  out.t = t;
  out.alpha = carleson_constant(cubes);

  std::unordered_map<std::uint64_t, std::size_t> position;
  for (std::size_t i = 0; i < cubes.size(); ++i) position.emplace(cube_key(cubes[i]), i);

  // strict ancestors of each cube inside the band, nearest first
  std::vector<std::vector<std::size_t>> ancestors(cubes.size());
  std::vector<int> generation(cubes.size(), 0);
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    const auto& q = cubes[i];
    for (int l = q.level - 1; l >= 0; --l) {
      auto it = position.find(cube_key(l, q.index >> (q.level - l)));
      if (it != position.end()) ancestors[i].push_back(it->second);
    }
    generation[i] = static_cast<int>(ancestors[i].size());
  }
  const int max_gen = *std::max_element(generation.begin(), generation.end());
  out.generations.resize(static_cast<std::size_t>(max_gen) + 1);
  for (std::size_t i = 0; i < cubes.size(); ++i)
    out.generations[static_cast<std::size_t>(generation[i])].push_back(cubes[i]);

  // descendants of each cube bucketed by generation gap
  std::vector<std::map<int, std::vector<std::size_t>>> below(cubes.size());
  for (std::size_t i = 0; i < cubes.size(); ++i)
    for (std::size_t a : ancestors[i]) below[a][generation[i] - generation[a]].push_back(i);

  out.entries.reserve(cubes.size());
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    const CellSet whole = CellSet::from_range(level_J, cell_range(cubes[i], level_J));
    auto union_at_gap = [&](int gap) {
      CellSet u(level_J);
      auto it = below[i].find(gap);
      if (it != below[i].end())
        for (std::size_t d : it->second) u.insert(cell_range(cubes[d], level_J));
      return u;
    };
    StoppingDecomposition::Entry e{cubes[i], generation[i], whole - union_at_gap(1),
                                   union_at_gap(t), CellSet(level_J)};
    for (int s = 1; s <= t; ++s) e.tilde_set |= whole - union_at_gap(s);
    out.entries.push_back(std::move(e));
  }
  return out;
}

StoppingDecomposition::Check StoppingDecomposition::verify() const {
  Check c;
  const std::size_t n = std::size_t{1} << level;
  std::vector<int> overlap(n, 0);
  const cpp_int num(alpha.num);
  const cpp_int den(alpha.den);
  const cpp_int excess = num >= den ? num - den : cpp_int(0);
  cpp_int excess_t = 1, den_t = 1;
  for (int s = 0; s < t; ++s) {
    excess_t *= excess;
    den_t *= den;
  }
  for (const auto& e : entries) {
    const CellRange r = cell_range(e.cube, level);
    CellSet direct = CellSet::from_range(level, r);
    for (const auto& other : entries)
      if (other.cube != e.cube && e.cube.contains(other.cube)) direct.erase(cell_range(other.cube, level));
    c.stopping_identity = c.stopping_identity && direct == e.stopping_set;

    // |Q^t| · den^t <= (num - den)^t · |Q|, all in cells
    const cpp_int lhs = cpp_int(e.layer_union.count()) * den_t;
    const cpp_int rhs = excess_t * cpp_int(r.size());
    c.layer_decay = c.layer_decay && lhs <= rhs;

    for (std::size_t cell : e.tilde_set.members()) ++overlap[cell];
  }
  c.max_overlap = overlap.empty() ? 0 : *std::max_element(overlap.begin(), overlap.end());
  c.overlap_bounded = c.max_overlap <= t;
  return c;
}

CellSet exceptional_sets(const GridFunction& b, const DyadicCube& q, int m, int k, double tau) {
  if (m < 1 || k < 1 || tau < 0.0) throw DomainError("exceptional_sets needs m >= 1, k >= 1, τ >= 0");
  const double threshold = std::pow(2.0 * std::numbers::e, m) * std::pow(4.0, m * (k + tau));
  const CellRange r = cell_range(q, b.level());
  const double mean = cube_average(b, q);
  CellSet out(b.level());
  for (std::size_t c = r.begin; c < r.end; ++c)
    if (std::pow(std::abs(b[c] - mean), m) > threshold) out.insert(c);
  return out;
}

double default_tau(int m) {
  if (m < 1) throw DomainError("default_tau needs m >= 1");
  auto phi = [m](double u) { return std::pow(std::log(std::numbers::e + u) / u, m); };  // u = log t
  for (double tau : {0.0, 0.5, 1.0, 2.0}) {
    const double u0 = std::pow(4.0, 1.0 + tau) - 1.0;
    bool decreasing = true;
    double prev = phi(u0);
    for (int i = 1; i <= 4000 && decreasing; ++i) {
      const double cur = phi(u0 * std::pow(1e6, i / 4000.0));
      decreasing = cur < prev;
      prev = cur;
    }
    if (decreasing) return tau;
  }
  return 2.0;
}

GridFunction sparse_commutator_apply(const CarlesonFamily& s, const GridFunction& b,
                                     const GridFunction& f, int h, int m) {
  if (h < 0 || m < 0 || h > m) throw DomainError("sparse_commutator_apply needs 0 <= h <= m");
  if (b.level() != f.level()) throw ResolutionError("symbol and function at different levels");
  const auto& k = simd::active_kernels();
  std::vector<double> out(f.size(), 0.0);
  for (const auto& q : s.cubes()) {
    const CellRange r = cell_range(q, f.level());
    const auto bq = b.cells().subspan(r.begin, r.size());
    const auto fq = f.cells().subspan(r.begin, r.size());
    const double n = static_cast<double>(r.size());
    const double mean_b = k.sum(bq) / n;
    const double coef = k.sum_abs_dev_pow_weighted(bq, mean_b, m - h, fq) / n;
    if (coef != 0.0) k.add_scaled_abs_dev_pow(std::span(out).subspan(r.begin, r.size()), bq, mean_b, h, coef);
  }
  return GridFunction(f.level(), std::move(out));
}

GridFunction sparse_commutator_sum(const CarlesonFamily& s, const GridFunction& b,
                                   const GridFunction& f, int m) {
  std::vector<double> out(f.size(), 0.0);
  for (int h = 0; h <= m; ++h) {
    const GridFunction part = sparse_commutator_apply(s, b, f, h, m);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += part[i];
  }
  return GridFunction(f.level(), std::move(out));
}

DominationReport pointwise_domination_check(const GridFunction& b, const GridFunction& f,
                                            const SignPattern& signs, int m) {
  if (m < 0) throw DomainError("commutator order must be >= 0");
  const GridFunction lhs = iterated_commutator(b, f, signs, m);

  CarlesonFamily family = build_sparse_from_function(f, 2.0);
  const double b0 = cube_average(b, kUnitCube);
  std::vector<double> weighted(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) weighted[i] = std::pow(std::abs(b[i] - b0), m) * f[i];
  const GridFunction g(f.level(), std::move(weighted));
  if (g.is_weight()) family = join(family, build_sparse_from_function(g, 2.0));

  const GridFunction rhs = sparse_commutator_sum(family, b, f, m);
  DominationReport rep;
  rep.family_size = family.size();
  rep.family_alpha = family.alpha();
  // cancellation in b·T(·) - T(b·) leaves rounding residue where the exact value is 0
  double b_max = 0.0, f_max = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    b_max = std::max(b_max, std::abs(b[i]));
    f_max = std::max(f_max, std::abs(f[i]));
  }
  rep.noise_floor = 1e-12 * std::pow(1.0 + b_max, m) * f_max;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double l = std::abs(lhs[i]);
    rep.max_lhs = std::max(rep.max_lhs, l);
    if (l <= rep.noise_floor) continue;
    if (rhs[i] > 0.0)
      rep.constant = std::max(rep.constant, l / rhs[i]);
    else
      ++rep.infinite_cells;
  }
  if (rep.infinite_cells > 0) rep.constant = std::numeric_limits<double>::infinity();
  return rep;
}

}  // namespace efs
