#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "entropy_fs/errors.hpp"
#include "entropy_fs/specs.hpp"

using namespace efs;

TEST_CASE("power weight has exact cell averages") {
  for (double a : {0.0, 0.3, 0.9}) {
    const GridFunction w = make_weight("power:" + std::to_string(a), 8, 1);
    double total = 0.0;
    for (double v : w.cells()) total += v / 256.0;
    CHECK(total == doctest::Approx(1.0 / (1.0 - a)).epsilon(1e-12));
    // refinement keeps the average over coarse cells
    const GridFunction fine = make_weight("power:" + std::to_string(a), 10, 1);
    CHECK(cube_average(fine, {0, 8, 0}) == doctest::Approx(w[0]).epsilon(1e-12));
  }
  CHECK_THROWS_AS(make_weight("power:1", 4, 1), UsageError);
}

TEST_CASE("simple corpus members") {
  const GridFunction tv = make_grid_function("twovalued", 3, 1);
  CHECK(tv == GridFunction(3, {1, 1, 1, 1, 10, 10, 10, 10}));
  CHECK(make_grid_function("twovalued:2:5", 1, 1) == GridFunction(1, {2, 5}));
  CHECK(make_grid_function("indicator", 2, 1) == GridFunction(2, {1, 1, 0, 0}));
  CHECK(make_grid_function("indicator:0.25:0.5", 2, 1) == GridFunction(2, {0, 1, 0, 0}));
  CHECK(make_grid_function("spine", 2, 1) == GridFunction(2, {4, 0, 0, 0}));
  CHECK(make_grid_function("const", 2, 1) == GridFunction::constant(2, 1.0));
  CHECK(make_grid_function("const:0", 2, 1) == GridFunction::zeros(2));
}

TEST_CASE("random corpus members are deterministic and nested across levels") {
  for (const auto& spec : {"lognormal", "random"}) {
    const GridFunction a = make_grid_function(spec, 9, 42), b = make_grid_function(spec, 9, 42);
    CHECK(a == b);
    CHECK(!(make_grid_function(spec, 9, 43) == a));
    const GridFunction fine = make_grid_function(spec, 11, 42);
    for (std::int64_t i = 0; i < 64; ++i)
      CHECK(cube_average(fine, {0, 6, i}) == doctest::Approx(cube_average(a, {0, 6, i})).epsilon(1e-13));
    CHECK(a.is_weight());
  }
}

TEST_CASE("file specs") {
  const auto path = std::filesystem::temp_directory_path() / "efs_test_grid.txt";
  {
    std::ofstream out(path);
    write_grid_function(out, GridFunction(2, {1, 2, 3, 4}));
  }
  const GridFunction g = make_grid_function("file:" + path.string(), 3, 1);
  CHECK(g == GridFunction(3, {1, 1, 2, 2, 3, 3, 4, 4}));
  CHECK_THROWS_AS(make_grid_function("file:" + path.string(), 1, 1), UsageError);
  std::filesystem::remove(path);
  CHECK_THROWS(make_grid_function("file:/nonexistent/grid.txt", 3, 1));
}

TEST_CASE("bad specs are usage errors") {
  for (const auto& spec : {"gauss", "power", "power:x", "power:0.3:1", "twovalued:1", "indicator:0.6:0.2", "spine:1", ""})
    CHECK_THROWS_AS(make_grid_function(spec, 4, 1), UsageError);
  CHECK_THROWS_AS(make_weight("const:0", 4, 1), UsageError);
  CHECK_THROWS_AS(make_weight("const:-1", 4, 1), UsageError);
}

TEST_CASE("default corpus") {
  const auto& c = default_corpus();
  CHECK(c.weights.size() == 6);
  CHECK(c.functions.size() == 4);
  CHECK(c.symbols.size() == 3);
  for (const auto& w : c.weights) CHECK(make_weight(w, 6, 1).is_weight());
  for (const auto& f : c.functions) CHECK(make_grid_function(f, 6, 1).size() == 64);
}
