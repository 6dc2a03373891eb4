#include <cmath>
#include <sstream>

#include "doctest.h"
#include "entropy_fs/errors.hpp"
#include "entropy_fs/grid.hpp"

using namespace efs;

TEST_CASE("cube_average examples") {
  CHECK(cube_average(GridFunction::constant(4, 3.0), {0, 1, 0}) == 3.0);
  CHECK(cube_average(GridFunction(2, {1, 1, 0, 0}), kUnitCube) == 0.5);
  CHECK(cube_average(GridFunction(2, {1, 2, 3, 4}), {0, 1, 1}) == 3.5);
  CHECK_THROWS_AS(cube_average(GridFunction(2, {1, 2, 3, 4}), {0, 3, 0}), ResolutionError);
}

TEST_CASE("weighted_measure examples") {
  CellSet quarter(2);
  quarter.insert(0);
  CHECK(weighted_measure(GridFunction::constant(2, 1.0), quarter) == 0.25);
  CHECK(weighted_measure(GridFunction::constant(2, 1.0), CellSet(2)) == 0.0);
  CellSet e(2);
  e.insert(0);
  e.insert(2);
  CHECK(weighted_measure(GridFunction(2, {1, 0, 2, 1}), e) == 0.75);
  CHECK_THROWS_AS(weighted_measure(GridFunction::constant(3, 1.0), e), ResolutionError);
}

TEST_CASE("level_set is strict") {
  CHECK(level_set(GridFunction::constant(2, 1.0), 1.0).empty());
  CHECK(level_set(GridFunction::constant(2, 1.0), 0.5).count() == 4);
  const CellSet s = level_set(GridFunction(2, {0.1, 0.9, 0.5, 0.7}), 0.6);
  CHECK(s.members() == std::vector<std::size_t>{1, 3});
}

TEST_CASE("enumerate_cubes counts and order") {
  CHECK(enumerate_cubes(1, kBaseLattice).size() == 3);
  CHECK(enumerate_cubes(2, kBaseLattice).size() == 7);
  const auto all = enumerate_cubes(2, kAllLattices);
  CHECK(all.size() == 21);
  CHECK(std::is_sorted(all.begin(), all.end()));
  for (const auto& q : all) CHECK_FALSE(cell_range(q, 2).empty());
}

TEST_CASE("lattice-0 children partition the parent exactly") {
  for (int j = 0; j < 10; ++j) {
    const DyadicCube q{0, j, (std::int64_t{1} << j) / 3};
    CHECK(q.child(0).measure() + q.child(1).measure() == q.measure());
    CHECK(q.contains(q.child(1)));
    CHECK(q.child(0).parent() == q);
  }
}

TEST_CASE("shifted lattice cubes are clipped to [0,1)") {
  const int J = 6;
  for (int lattice : {1, 2}) {
    const std::size_t off = lattice_offset(lattice, J);
    CHECK(off == static_cast<std::size_t>(std::llround(lattice * 64.0 / 3.0)));
    const CellRange top = cell_range({lattice, 0, 0}, J);
    CHECK(top.begin == off);
    CHECK(top.end == 64);
    CHECK(clipped_measure({lattice, 0, 0}, J) == static_cast<double>(64 - off) / 64.0);
  }
}

TEST_CASE("cube_average is affine") {
  const GridFunction f(3, {0.5, -1, 2, 7, 3, 3, 0, 1});
  for (const auto& q : enumerate_cubes(3, kAllLattices)) {
    const double a = cube_average(f, q);
    const double g = cube_average(f.affine(-2.5, 4.0), q);
    CHECK(g == doctest::Approx(-2.5 * a + 4.0).epsilon(1e-12));
  }
}

TEST_CASE("weighted measure of all cells is the mean") {
  const GridFunction w(3, {0.5, 1, 2, 7, 3, 3, 0, 1});
  CHECK(weighted_measure(w, CellSet::full(3)) == doctest::Approx(cube_average(w, kUnitCube)).epsilon(1e-15));
}

TEST_CASE("level sets are nested") {
  const GridFunction f(3, {0.5, 1, 2, 7, 3, 3, 0, 1});
  for (double t1 : {-1.0, 0.0, 0.5, 1.0, 2.5})
    for (double t2 : {0.5, 1.0, 3.0, 8.0})
      if (t1 <= t2) CHECK(level_set(f, t2).is_subset_of(level_set(f, t1)));
}

TEST_CASE("CellSet algebra and measure") {
  CellSet a(7), b(7);
  a.insert(CellRange{0, 100});
  b.insert(CellRange{64, 128});
  CHECK((a & b).count() == 36);
  CHECK((a | b).count() == 128);
  CHECK((a - b).count() == 64);
  CHECK((a & b).measure() == 36.0 / 128.0);
  a.erase(CellRange{0, 100});
  CHECK(a.empty());
}

TEST_CASE("GridFunction text round trip") {
  const GridFunction f(2, {0.1, -3.25, 1e-300, 12345.678901234567});
  std::stringstream ss;
  write_grid_function(ss, f);
  CHECK(read_grid_function(ss) == f);

  std::istringstream bad("level=2\n1 2 3\n");
  CHECK_THROWS_AS(read_grid_function(bad), Error);
  std::istringstream inf("level=1\n1 inf\n");
  CHECK_THROWS_AS(read_grid_function(inf), Error);
}

TEST_CASE("refinement and weight checks") {
  const GridFunction f(1, {1, 3});
  CHECK(f.refined(3) == GridFunction(3, {1, 1, 1, 1, 3, 3, 3, 3}));
  CHECK(f.is_weight());
  CHECK_FALSE(GridFunction::zeros(2).is_weight());
  CHECK_THROWS_AS(GridFunction(1, {1, -1}).require_weight(), DomainError);
}
