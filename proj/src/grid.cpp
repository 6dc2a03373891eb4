#include "entropy_fs/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "entropy_fs/errors.hpp"
#include "entropy_fs/simd.hpp"

namespace efs {
namespace {

void check_level(int level) {
  if (level < 1 || level > kMaxLevel)
    throw DomainError("grid level must lie in [1, " + std::to_string(kMaxLevel) + "], got " +
                      std::to_string(level));
}

}  // namespace

GridFunction::GridFunction(int level, std::vector<double> cells)
    : level_(level), cells_(std::move(cells)) {
  check_level(level);
  if (cells_.size() != (std::size_t{1} << level))
    throw DomainError("grid function at level " + std::to_string(level) + " needs " +
                      std::to_string(std::size_t{1} << level) + " cells, got " +
                      std::to_string(cells_.size()));
  for (std::size_t i = 0; i < cells_.size(); ++i)
    if (!std::isfinite(cells_[i]))
      throw DomainError("grid function cell " + std::to_string(i) + " is not finite");
}

GridFunction GridFunction::constant(int level, double value) {
  check_level(level);
  return GridFunction(level, std::vector<double>(std::size_t{1} << level, value));
}

double GridFunction::cell_width() const { return std::ldexp(1.0, -level_); }

bool GridFunction::is_weight() const {
  bool positive = false;
  for (double v : cells_) {
    if (v < 0.0) return false;
    positive = positive || v > 0.0;
  }
  return positive;
}

void GridFunction::require_weight(const char* what) const {
  if (!is_weight())
    throw DomainError(std::string(what) + " must be nonnegative and not identically zero");
}

GridFunction GridFunction::abs() const {
  std::vector<double> out(cells_.size());
  std::transform(cells_.begin(), cells_.end(), out.begin(), [](double v) { return std::abs(v); });
  return GridFunction(level_, std::move(out));
}

GridFunction GridFunction::affine(double a, double c) const {
  std::vector<double> out(cells_.size());
  std::transform(cells_.begin(), cells_.end(), out.begin(), [=](double v) { return a * v + c; });
  return GridFunction(level_, std::move(out));
}

GridFunction GridFunction::times(const GridFunction& other) const {
  if (other.level_ != level_) throw ResolutionError("pointwise product of grids at different levels");
  std::vector<double> out(cells_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = cells_[i] * other.cells_[i];
  return GridFunction(level_, std::move(out));
}

GridFunction GridFunction::refined(int level) const {
  if (level < level_) throw ResolutionError("cannot refine to a coarser level");
  const std::size_t rep = std::size_t{1} << (level - level_);
  std::vector<double> out;
  out.reserve(cells_.size() * rep);
  for (double v : cells_) out.insert(out.end(), rep, v);
  return GridFunction(level, std::move(out));
}

GridFunction read_grid_function(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw UsageError("grid function: missing `level=J` header");
  const auto eq = header.find('=');
  if (eq == std::string::npos || header.substr(0, eq) != "level")
    throw UsageError("grid function: first line must be `level=J`, got `" + header + "`");
  int level = 0;
  try {
    std::size_t used = 0;
    level = std::stoi(header.substr(eq + 1), &used);
  } catch (const std::exception&) {
    throw UsageError("grid function: bad level in `" + header + "`");
  }
  if (level < 1 || level > kMaxLevel) throw UsageError("grid function: level out of range");
  std::vector<double> cells;
  cells.reserve(std::size_t{1} << level);
  std::string token;
  while (in >> token) {
    try {
      cells.push_back(std::stod(token));
    } catch (const std::exception&) {
      throw UsageError("grid function: bad value `" + token + "`");
    }
  }
  if (cells.size() != (std::size_t{1} << level))
    throw UsageError("grid function: expected " + std::to_string(std::size_t{1} << level) +
                     " values, read " + std::to_string(cells.size()));
  try {
    return GridFunction(level, std::move(cells));
  } catch (const DomainError& e) {
    throw UsageError(std::string("grid function: ") + e.what());
  }
}

GridFunction load_grid_function(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open grid function file " + path.string());
  return read_grid_function(in);
}

void write_grid_function(std::ostream& out, const GridFunction& f) {
  out << "level=" << f.level() << '\n';
  std::ostringstream line;
  line.precision(17);
  for (std::size_t i = 0; i < f.size(); ++i) line << (i ? " " : "") << f[i];
  out << line.str() << '\n';
}

// ---------------------------------------------------------------------------

double DyadicCube::measure() const { return std::ldexp(1.0, -level); }

bool DyadicCube::contains(const DyadicCube& other) const {
  if (other.lattice != lattice || other.level < level) return false;
  return (other.index >> (other.level - level)) == index;
}

std::string to_string(const DyadicCube& q) {
  return std::to_string(q.lattice) + ":" + std::to_string(q.level) + ":" + std::to_string(q.index);
}

std::size_t lattice_offset(int lattice, int level_J) {
  if (lattice < 0 || lattice > 2) throw DomainError("lattice must be 0, 1 or 2");
  const double n = std::ldexp(1.0, level_J);
  return static_cast<std::size_t>(std::llround(lattice * n / 3.0));
}

CellRange cell_range(const DyadicCube& q, int level_J) {
  if (q.level > level_J)
    throw ResolutionError("cube " + to_string(q) + " is finer than grid level " +
                          std::to_string(level_J));
  if (q.level < 0 || q.index < 0 || q.index >= (std::int64_t{1} << q.level))
    throw DomainError("invalid cube " + to_string(q));
  const std::size_t n = std::size_t{1} << level_J;
  const std::size_t len = std::size_t{1} << (level_J - q.level);
  const std::size_t begin =
      (static_cast<std::size_t>(q.index) * len + lattice_offset(q.lattice, level_J) % len) % n;
  // A shifted tiling can wrap only through the last cube; that cube is clipped at 1.
  const std::size_t end = std::min(begin + len, n);
  return {begin, end};
}

double clipped_measure(const DyadicCube& q, int level_J) {
  return std::ldexp(static_cast<double>(cell_range(q, level_J).size()), -level_J);
}

std::span<const double> restrict_to(const GridFunction& f, const DyadicCube& q) {
  const CellRange r = cell_range(q, f.level());
  return f.cells().subspan(r.begin, r.size());
}

// ---------------------------------------------------------------------------

CellSet::CellSet(int level) : level_(level) {
  check_level(level);
  words_.assign(((std::size_t{1} << level) + 63) / 64, 0);
}

CellSet CellSet::full(int level) {
  CellSet s(level);
  s.insert(CellRange{0, s.size()});
  return s;
}

CellSet CellSet::from_range(int level, CellRange r) {
  CellSet s(level);
  s.insert(r);
  return s;
}

void CellSet::insert(std::size_t cell) { words_[cell / 64] |= std::uint64_t{1} << (cell % 64); }

void CellSet::insert(CellRange r) {
  for (std::size_t c = r.begin; c < r.end; ++c) insert(c);
}

void CellSet::erase(std::size_t cell) { words_[cell / 64] &= ~(std::uint64_t{1} << (cell % 64)); }

void CellSet::erase(CellRange r) {
  for (std::size_t c = r.begin; c < r.end; ++c) erase(c);
}

bool CellSet::contains(std::size_t cell) const {
  return (words_[cell / 64] >> (cell % 64)) & 1U;
}

std::size_t CellSet::count() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

double CellSet::measure() const { return std::ldexp(static_cast<double>(count()), -level_); }

void CellSet::check_same_level(const CellSet& o) const {
  if (o.level_ != level_) throw ResolutionError("cell sets at different levels");
}

CellSet& CellSet::operator|=(const CellSet& o) {
  check_same_level(o);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  return *this;
}

CellSet& CellSet::operator&=(const CellSet& o) {
  check_same_level(o);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  return *this;
}

CellSet& CellSet::operator-=(const CellSet& o) {
  check_same_level(o);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
  return *this;
}

bool CellSet::is_subset_of(const CellSet& o) const {
  check_same_level(o);
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & ~o.words_[i]) return false;
  return true;
}

std::vector<std::size_t> CellSet::members() const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < size(); ++c)
    if (contains(c)) out.push_back(c);
  return out;
}

CellSet operator|(CellSet a, const CellSet& b) { return a |= b; }
CellSet operator&(CellSet a, const CellSet& b) { return a &= b; }
CellSet operator-(CellSet a, const CellSet& b) { return a -= b; }

// ---------------------------------------------------------------------------

double cube_average(const GridFunction& f, const DyadicCube& q) {
  const auto cells = restrict_to(f, q);
  return simd::active_kernels().sum(cells) / static_cast<double>(cells.size());
}

double weighted_measure(const GridFunction& w, const CellSet& e) {
  if (w.level() != e.level())
    throw ResolutionError("weighted_measure: weight at level " + std::to_string(w.level()) +
                          ", set at level " + std::to_string(e.level()));
  double acc = 0.0;
  for (std::size_t c = 0; c < w.size(); ++c)
    if (e.contains(c)) acc += w[c];
  return acc * w.cell_width();
}

CellSet level_set(const GridFunction& f, double t) {
  CellSet s(f.level());
  for (std::size_t c = 0; c < f.size(); ++c)
    if (f[c] > t) s.insert(c);
  return s;
}

std::vector<DyadicCube> enumerate_cubes(int level_J, const LatticeSet& lattices) {
  if (level_J < 1) throw DomainError("enumerate_cubes needs J >= 1");
  std::vector<int> ls(lattices);
  std::sort(ls.begin(), ls.end());
  ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
  std::vector<DyadicCube> out;
  out.reserve(ls.size() * ((std::size_t{2} << level_J) - 1));
  for (int l : ls) {
    if (l < 0 || l > 2) throw DomainError("lattice must be 0, 1 or 2");
    for (int j = 0; j <= level_J; ++j)
      for (std::int64_t i = 0; i < (std::int64_t{1} << j); ++i) out.push_back({l, j, i});
  }
  return out;
}

}  // namespace efs
