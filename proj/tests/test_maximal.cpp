#include <cmath>

#include "doctest.h"
#include "entropy_fs/errors.hpp"
#include "entropy_fs/maximal.hpp"
#include "entropy_fs/properties.hpp"
#include "entropy_fs/rng.hpp"
#include "entropy_fs/specs.hpp"
#include "oracles.hpp"

using namespace efs;

namespace {

/// Cells of cube (lattice, level, index) at resolution J: a level-j cube is
/// shifted by the lattice offset reduced modulo its length and clipped at 1.
std::pair<std::size_t, std::size_t> shifted_cells(int J, int lattice, int level, std::int64_t index) {
  const std::size_t n = std::size_t{1} << J, len = std::size_t{1} << (J - level);
  const auto off = static_cast<std::size_t>(std::llround(lattice * static_cast<double>(n) / 3.0)) % len;
  const std::size_t b = static_cast<std::size_t>(index) * len + off;
  return {std::min(b, n), std::min(b + len, n)};
}

std::vector<double> brute_maximal(const std::vector<double>& f, int J, const std::vector<int>& lattices) {
  std::vector<double> out(f.size(), 0.0);
  for (int l : lattices)
    for (int j = 0; j <= J; ++j)
      for (std::int64_t i = 0; i < (std::int64_t{1} << j); ++i) {
        const auto [b, e] = shifted_cells(J, l, j, i);
        if (b == e) continue;
        double s = 0.0;
        for (std::size_t c = b; c < e; ++c) s += std::abs(f[c]);
        for (std::size_t c = b; c < e; ++c) out[c] = std::max(out[c], s / static_cast<double>(e - b));
      }
  return out;
}

GridFunction seeded(int J, std::uint64_t seed) {
  std::vector<double> v(std::size_t{1} << J);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::exp(hashed_normal(seed, i)) * (i % 5 == 0 ? 0.0 : 1.0);
  return GridFunction(J, v);
}

double t_star(int k) {
  return oracle::root([k](double t) { return oracle::phik(t, k) - 1.0; }, 0.05, 2.0);
}

}  // namespace

TEST_CASE("dyadic_maximal examples") {
  CHECK(dyadic_maximal(GridFunction::constant(4, -2.5), kAllLattices) == GridFunction::constant(4, 2.5));
  CHECK(dyadic_maximal(GridFunction(1, {1, 0}), kBaseLattice) == GridFunction(1, {1, 0.5}));
  CHECK(dyadic_maximal(GridFunction(2, {1, 0, 0, 0}), kBaseLattice) == GridFunction(2, {1, 0.5, 0.25, 0.25}));
}

TEST_CASE("dyadic_maximal matches brute-force enumeration") {
  for (int J : {3, 5, 7}) {
    const GridFunction f = seeded(J, static_cast<std::uint64_t>(J));
    const std::vector<double> cells(f.cells().begin(), f.cells().end());
    for (const auto& lat : {kBaseLattice, kAllLattices, LatticeSet{1, 2}}) {
      const auto want = brute_maximal(cells, J, lat);
      const auto got = dyadic_maximal(f, lat);
      for (std::size_t c = 0; c < want.size(); ++c) CHECK(got[c] == doctest::Approx(want[c]).epsilon(1e-13));
    }
  }
}

TEST_CASE("rho_rahm examples and brute force") {
  CHECK(rho_rahm(GridFunction::constant(5, 4.0), {0, 1, 1}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rho_rahm(GridFunction::zeros(3), kUnitCube) == 1.0);
  const int J = 6;
  const GridFunction w = seeded(J, 99);
  const std::vector<double> cells(w.cells().begin(), w.cells().end());
  for (int level = 0; level <= 3; ++level)
    for (std::int64_t idx = 0; idx < (std::int64_t{1} << level); ++idx) {
      const auto [b, e] = oracle::base_cells(J, level, idx);
      std::vector<double> local(cells.begin() + b, cells.begin() + e);
      const auto m = brute_maximal(local, J - level, kBaseLattice);
      double num = 0.0, den = 0.0;
      for (std::size_t c = 0; c < local.size(); ++c) num += m[c], den += local[c];
      const DyadicCube q{0, level, idx};
      CHECK(rho_rahm(w, q) == doctest::Approx(num / den).epsilon(1e-12));
      CHECK(rho_rahm(w.affine(13.0), q) == doctest::Approx(rho_rahm(w, q)).epsilon(1e-12));
    }
  // χ of the left half: brute force gives (1/(c/2))·(c/2 + c/4 + ...) structure
  const GridFunction half(3, {2, 2, 2, 2, 0, 0, 0, 0});
  const auto m = brute_maximal({2, 2, 2, 2, 0, 0, 0, 0}, 3, kBaseLattice);
  double integral = 0.0;
  for (double v : m) integral += v;
  CHECK(rho_rahm(half, kUnitCube) == doctest::Approx(integral / 8.0).epsilon(1e-14));
}

TEST_CASE("rho_k examples") {
  const GridFunction w = seeded(6, 5);
  for (const auto& q : enumerate_cubes(6, kAllLattices)) CHECK(rho_k(w, q, 0) == doctest::Approx(1.0).epsilon(1e-9));
  const GridFunction c = GridFunction::constant(6, 3.7);
  CHECK(rho_k(c, {0, 2, 3}, 1) == doctest::Approx(1.0 / t_star(1)).epsilon(1e-9));
  CHECK(rho_k(c, {2, 4, 1}, 2) == doctest::Approx(1.0 / t_star(2)).epsilon(1e-9));
  CHECK(1.0 / t_star(1) == doctest::Approx(1.2553).epsilon(2e-3));
  CHECK(1.0 / t_star(2) == doctest::Approx(1.488).epsilon(2e-3));
  CHECK(rho_k(GridFunction::zeros(3), kUnitCube, 2) == 1.0);
}

TEST_CASE("orlicz_maximal examples") {
  const GridFunction w = seeded(6, 7);
  const auto hl = dyadic_maximal(w, kAllLattices);
  const auto p1 = orlicz_maximal(w, YoungFunction::power(1), kAllLattices);
  for (std::size_t i = 0; i < w.size(); ++i) CHECK(p1[i] == doctest::Approx(hl[i]).epsilon(1e-9));

  const auto cst = orlicz_maximal(GridFunction::constant(5, 2.0), YoungFunction::phi_k(1), kAllLattices);
  for (double v : cst.cells()) CHECK(v == doctest::Approx(2.0 / t_star(1)).epsilon(1e-9));

  const auto half = orlicz_maximal(GridFunction(1, {1, 0}), YoungFunction::phi_k(1), kBaseLattice);
  const double top = oracle::luxemburg({1.0, 0.0}, [](double t) { return oracle::phik(t, 1); });
  CHECK(half[1] == doctest::Approx(top).epsilon(1e-9));
  CHECK(half[0] == doctest::Approx(std::max(top, 1.0 / t_star(1))).epsilon(1e-9));
}

TEST_CASE("entropy_maximal examples") {
  const GridFunction one = GridFunction::constant(5, 1.0);
  const auto m = entropy_maximal(one, {YoungFunction::power(1), 1, EpsilonFunction::constant(1)}, kAllLattices);
  const double want = std::log2(2.0 + 1.0 / t_star(1));
  CHECK(want == doctest::Approx(1.7029).epsilon(2e-3));
  for (double v : m.cells()) CHECK(v == doctest::Approx(want).epsilon(1e-9));

  const GridFunction w = seeded(6, 8);
  const auto k0 = entropy_maximal(w, {YoungFunction::power(1), 0, EpsilonFunction::constant(1)}, kAllLattices);
  const auto hl = dyadic_maximal(w, kAllLattices);
  for (std::size_t i = 0; i < w.size(); ++i) CHECK(k0[i] == doctest::Approx(std::log2(3.0) * hl[i]).epsilon(1e-9));

  const auto c1 = entropy_maximal(w, {YoungFunction::phi_k(1), 2, EpsilonFunction::constant(1)}, kAllLattices);
  const auto p1 = entropy_maximal(w, {YoungFunction::phi_k(1), 2, EpsilonFunction::pow(1)}, kAllLattices);
  for (std::size_t i = 0; i < w.size(); ++i) CHECK(p1[i] >= c1[i]);

  const EntropyTable table(w, YoungFunction::phi_k(1), 2, kAllLattices);
  const auto via_table = table.maximal(EpsilonFunction::pow(1));
  for (std::size_t i = 0; i < w.size(); ++i) CHECK(via_table[i] == p1[i]);
}

TEST_CASE("M_{Φ_m} w <= M_{ε,Φ_m,m+1} w pointwise") {
  for (const auto& spec : default_corpus().weights) {
    const GridFunction w = make_weight(spec, 7, 1);
    for (int m = 1; m <= 2; ++m) {
      const auto bump = orlicz_maximal(w, YoungFunction::phi_k(m), kAllLattices);
      for (const auto& eps : {"const:1", "logpow:1", "pow:0.5"}) {
        const auto ent = entropy_maximal(w, {YoungFunction::phi_k(m), m + 1, EpsilonFunction::parse(eps)}, kAllLattices);
        for (std::size_t i = 0; i < w.size(); ++i) CHECK(bump[i] <= ent[i]);
      }
    }
  }
}

TEST_CASE("epsilon functions and series") {
  CHECK(epsilon_series(EpsilonFunction::constant(1), 3) == 4.0);
  CHECK(epsilon_series(EpsilonFunction::pow(1), 2) == 1.0);
  CHECK(epsilon_series(EpsilonFunction::constant(1), 10) == 11.0);
  double direct = 0.0;
  for (int r = 0; r <= 6; ++r) direct += 1.0 / std::pow(std::log2(2.0 + std::pow(2.0, std::pow(2.0, r))), 2.0);
  CHECK(epsilon_series(EpsilonFunction::log_pow(1), 6) == doctest::Approx(std::max(direct, 1.0)).epsilon(1e-14));
  // deep truncation stays finite
  CHECK(std::isfinite(epsilon_series(EpsilonFunction::log_pow(1), 200)));
  CHECK(std::isfinite(epsilon_series(EpsilonFunction::pow(0.1), 200)));
  for (const auto& spec : {"const:1", "const:3", "logpow:0", "logpow:2", "pow:0.5", "pow:2"}) {
    const auto e = EpsilonFunction::parse(spec);
    CHECK(e.to_string() == spec);
    double prev = 1.0;
    for (double t = 1.0; t < 1e6; t *= 3.0) {
      CHECK(e(t) >= 1.0);
      CHECK(e(t) >= prev);
      prev = e(t);
    }
  }
  CHECK_THROWS(EpsilonFunction::parse("const:0.5"));
  CHECK_THROWS(EpsilonFunction::parse("pow:0"));
  CHECK_THROWS(EpsilonFunction::parse("sqrt"));
  CHECK_THROWS_AS(epsilon_series(EpsilonFunction::pow(1), -1), DomainError);
}

TEST_CASE("ρ_w and ρ_{1,w} are comparable with a stable constant") {
  const auto r = properties::rahm_equivalence({8, 10, 12});
  INFO(r.to_json().dump());
  CHECK(r.passed);
}

TEST_CASE("Φ_k norm and entropy integral are comparable with a stable constant") {
  const auto r = properties::entropy_integral_equivalence({8, 14});
  INFO(r.to_json().dump());
  CHECK(r.passed);
}

TEST_CASE("entropy density laws at reduced scale") {
  const auto r = properties::entropy_density({6, 8});
  INFO(r.to_json().dump());
  CHECK(r.passed);
}
