#include <cmath>

#include "doctest.h"
#include "entropy_fs/bmo.hpp"
#include "entropy_fs/errors.hpp"
#include "entropy_fs/martingale.hpp"
#include "entropy_fs/specs.hpp"
#include "oracles.hpp"

using namespace efs;

namespace {

std::vector<double> dense(const GridFunction& g) { return {g.cells().begin(), g.cells().end()}; }

}  // namespace

TEST_CASE("sign patterns") {
  const auto alt = SignPattern::alternating();
  const auto rnd = SignPattern::random(11);
  int plus = 0;
  for (int j = 0; j < 10; ++j)
    for (std::int64_t i = 0; i < (std::int64_t{1} << j); ++i) {
      CHECK(std::abs(alt(j, i)) == 1.0);
      CHECK(std::abs(rnd(j, i)) == 1.0);
      CHECK(rnd(j, i) == SignPattern::random(11)(j, i));
      plus += rnd(j, i) > 0;
    }
  CHECK(plus > 400);
  CHECK(plus < 623);
  CHECK(alt.to_string() != rnd.to_string());
}

TEST_CASE("martingale transform matches the dense Haar expansion") {
  for (int J : {1, 4, 7}) {
    for (const auto& spec : {"lognormal", "indicator", "spine", "random"}) {
      const GridFunction f = make_grid_function(spec, J, 3);
      for (const auto& signs : {SignPattern::alternating(), SignPattern::random(7)}) {
        const auto got = martingale_transform(f, signs);
        const auto want = oracle::martingale(dense(f), J, [&](int j, std::int64_t i) { return signs(j, i); });
        for (std::size_t c = 0; c < want.size(); ++c) CHECK(got[c] == doctest::Approx(want[c]).scale(1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("martingale transform basic laws") {
  const int J = 6;
  CHECK(martingale_transform(GridFunction::constant(J, 4.0), SignPattern::alternating()) == GridFunction::zeros(J));
  // all signs +1 reconstructs f minus its mean
  const GridFunction f = make_grid_function("lognormal", J, 2);
  const auto all_plus = oracle::martingale(dense(f), J, [](int, std::int64_t) { return 1.0; });
  const double mean = cube_average(f, kUnitCube);
  for (std::size_t c = 0; c < f.size(); ++c) CHECK(all_plus[c] == doctest::Approx(f[c] - mean).epsilon(1e-12));
  // linearity
  const GridFunction g = make_grid_function("random", J, 5);
  const auto s = SignPattern::random(3);
  const auto tf = martingale_transform(f, s), tg = martingale_transform(g, s);
  const auto tsum = martingale_transform(f.affine(2.0).times(GridFunction::constant(J, 1.0)), s);
  for (std::size_t c = 0; c < f.size(); ++c) CHECK(tsum[c] == doctest::Approx(2.0 * tf[c]).epsilon(1e-12));
  CHECK(tg.size() == g.size());
}

TEST_CASE("iterated commutator matches the dense recursion") {
  const int J = 6;
  for (const auto& b_spec : {"haar", "logdist", "martingale:7:6"}) {
    const GridFunction b = generate_symbol(SymbolSpec::parse(b_spec), J);
    const GridFunction f = make_grid_function("lognormal", J, 1);
    for (const auto& signs : {SignPattern::alternating(), SignPattern::random(2)})
      for (int m = 0; m <= 2; ++m) {
        const auto got = iterated_commutator(b, f, signs, m);
        const auto want = oracle::commutator(dense(b), dense(f), J, [&](int j, std::int64_t i) { return signs(j, i); }, m);
        double scale = 1.0;
        for (double v : want) scale = std::max(scale, std::abs(v));
        for (std::size_t c = 0; c < want.size(); ++c) CHECK(std::abs(got[c] - want[c]) <= 1e-11 * scale);
      }
  }
}

TEST_CASE("commutator with a constant symbol vanishes") {
  const int J = 7;
  const GridFunction f = make_grid_function("random", J, 1);
  for (int m = 1; m <= 3; ++m) {
    const auto t = iterated_commutator(GridFunction::constant(J, 3.0), f, SignPattern::alternating(), m);
    for (double v : t.cells()) CHECK(std::abs(v) <= 1e-12);
  }
}
