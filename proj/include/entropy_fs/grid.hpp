#pragma once

// Piecewise-constant functions on [0,1) at dyadic resolution 2^-J, dyadic cubes
// in three shifted lattices, and cell sets. All integrals are finite sums over
// cells, so cube measures and set measures are exact binary fractions.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace efs {

/// Largest resolution the library accepts; keeps cell counts in 32 bits.
inline constexpr int kMaxLevel = 24;

class GridFunction {
 public:
  GridFunction(int level, std::vector<double> cells);

  static GridFunction constant(int level, double value);
  static GridFunction zeros(int level) { return constant(level, 0.0); }

  int level() const { return level_; }
  std::size_t size() const { return cells_.size(); }
  double cell_width() const;
  std::span<const double> cells() const { return cells_; }
  double operator[](std::size_t i) const { return cells_[i]; }

  bool is_weight() const;
  /// Throws DomainError unless all cells are >= 0 and one is > 0.
  void require_weight(const char* what = "weight") const;

  GridFunction abs() const;
  /// a·f + c
  GridFunction affine(double a, double c = 0.0) const;
  GridFunction times(const GridFunction& other) const;

  /// Piecewise-constant refinement to a finer level.
  GridFunction refined(int level) const;

  bool operator==(const GridFunction&) const = default;

 private:
  int level_;
  std::vector<double> cells_;
};

/// Text format: `level=J` on the first line, then 2^J whitespace-separated values.
GridFunction read_grid_function(std::istream& in);
GridFunction load_grid_function(const std::filesystem::path& path);
void write_grid_function(std::ostream& out, const GridFunction& f);

/// Lattice 0 is the standard dyadic grid; lattices 1 and 2 are shifted by 1/3
/// and 2/3 (snapped to the nearest cell) modulo 1, without wrap-around.
struct DyadicCube {
  int lattice = 0;
  int level = 0;
  std::int64_t index = 0;

  auto operator<=>(const DyadicCube&) const = default;

  double measure() const;  // 2^-level, the unclipped measure
  DyadicCube parent() const { return {lattice, level - 1, index / 2}; }
  DyadicCube child(int which) const { return {lattice, level + 1, 2 * index + which}; }
  /// Lattice-0 containment (descendant or equal).
  bool contains(const DyadicCube& other) const;
};

inline constexpr DyadicCube kUnitCube{0, 0, 0};

std::string to_string(const DyadicCube& q);

/// Half-open range of cells covered by a (clipped) cube.
struct CellRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
  bool empty() const { return begin == end; }
};

std::size_t lattice_offset(int lattice, int level_J);
/// Throws ResolutionError when the cube is finer than the grid.
CellRange cell_range(const DyadicCube& q, int level_J);
double clipped_measure(const DyadicCube& q, int level_J);

/// The cells of f restricted to Q.
std::span<const double> restrict_to(const GridFunction& f, const DyadicCube& q);

class CellSet {
 public:
  explicit CellSet(int level);
  static CellSet full(int level);
  static CellSet from_range(int level, CellRange r);

  int level() const { return level_; }
  std::size_t size() const { return std::size_t{1} << level_; }

  void insert(std::size_t cell);
  void insert(CellRange r);
  void erase(std::size_t cell);
  void erase(CellRange r);
  bool contains(std::size_t cell) const;

  std::size_t count() const;
  double measure() const;  // count · 2^-J, exact
  bool empty() const { return count() == 0; }

  CellSet& operator|=(const CellSet& o);
  CellSet& operator&=(const CellSet& o);
  CellSet& operator-=(const CellSet& o);
  bool is_subset_of(const CellSet& o) const;
  bool operator==(const CellSet&) const = default;

  std::vector<std::size_t> members() const;

 private:
  void check_same_level(const CellSet& o) const;

  int level_;
  std::vector<std::uint64_t> words_;
};

CellSet operator|(CellSet a, const CellSet& b);
CellSet operator&(CellSet a, const CellSet& b);
CellSet operator-(CellSet a, const CellSet& b);

double cube_average(const GridFunction& f, const DyadicCube& q);
double weighted_measure(const GridFunction& w, const CellSet& e);
/// Strict super-level set {f > t}.
CellSet level_set(const GridFunction& f, double t);

using LatticeSet = std::vector<int>;
inline const LatticeSet kAllLattices{0, 1, 2};
inline const LatticeSet kBaseLattice{0};

/// All cubes of levels 0..J in the given lattices, ordered by (lattice, level, index).
std::vector<DyadicCube> enumerate_cubes(int level_J, const LatticeSet& lattices);

}  // namespace efs
