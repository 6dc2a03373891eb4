#include <cmath>
#include <limits>

#include "doctest.h"
#include "entropy_fs/errors.hpp"
#include "entropy_fs/harness.hpp"
#include "entropy_fs/properties.hpp"
#include "oracles.hpp"

using namespace efs;

namespace {

ExperimentConfig base_config(int J) {
  ExperimentConfig c;
  c.level = J;
  c.weight = "const";
  c.function = "const";
  return c;
}

double t_star(int k) {
  return oracle::root([k](double t) { return oracle::phik(t, k) - 1.0; }, 0.05, 2.0);
}

double lloglp_star() {
  return oracle::root([](double t) { return t * std::log(oracle::kE + t) - 1.0; }, 0.05, 2.0);
}

}  // namespace

TEST_CASE("ratio convention") {
  CHECK(ratio_of(0.0, 0.0) == 0.0);
  CHECK(ratio_of(0.0, 5.0) == 0.0);
  CHECK(ratio_of(1.0, 4.0) == 0.25);
  CHECK(std::isinf(ratio_of(2.0, 0.0)));
}

TEST_CASE("t-grid parsing and values") {
  const auto g = TGrid::parse("0.5:8:5");
  const auto v = g.values(2.0);
  REQUIRE(v.size() == 5);
  CHECK(v.front() == doctest::Approx(1.0));
  CHECK(v[1] == doctest::Approx(2.0));
  CHECK(v.back() == doctest::Approx(16.0));
  CHECK(TGrid::single(0.75).values(100.0) == std::vector<double>{0.75});
  for (const auto& bad : {"1:2", "0:1:3", "-1:2:3", "2:1:3", "1:2:0", "a:b:c", "1:2:3:4"})
    CHECK_THROWS_AS(TGrid::parse(bad), UsageError);
}

TEST_CASE("fs ratio examples") {
  auto c = base_config(1);
  c.function = "indicator";
  c.t_grid = TGrid::single(0.75);
  const auto r = run_fs_ratio(c);
  REQUIRE(r.size() == 1);
  CHECK(r[0].lhs == doctest::Approx(0.5));
  CHECK(r[0].rhs == doctest::Approx(2.0 / 3.0));
  CHECK(r[0].ratio == doctest::Approx(0.75));
  CHECK(r[0].bmo == "-");
  CHECK(r[0].epsilon == "-");

  c.t_grid = TGrid::single(1.5);
  CHECK(run_fs_ratio(c)[0].lhs == 0.0);
  CHECK(run_fs_ratio(c)[0].ratio == 0.0);

  auto z = base_config(6);
  z.function = "const:0";
  z.t_grid = TGrid::parse("0.01:100:7");
  for (const auto& row : run_fs_ratio(z)) CHECK(row.ratio == 0.0);

  auto d = base_config(4);
  d.weight = "const:0";
  CHECK_THROWS_AS(run_fs_ratio(d), ConfigError);
}

TEST_CASE("perez ratio examples") {
  auto c = base_config(5);
  c.rho = 1.0;
  c.t_grid = TGrid::single(0.5);
  const auto below = run_perez_ratio(c);
  CHECK(below[0].lhs == doctest::Approx(1.0));
  CHECK(below[0].rhs == doctest::Approx(2.0 / lloglp_star()).epsilon(1e-9));
  CHECK(1.0 / lloglp_star() == doctest::Approx(1.2553).epsilon(2e-3));
  c.t_grid = TGrid::single(1.0);
  CHECK(run_perez_ratio(c)[0].lhs == 0.0);

  c.function = "const:0";
  c.t_grid = TGrid::parse("0.1:10:5");
  for (const auto& row : run_perez_ratio(c)) CHECK(row.ratio == 0.0);
}

TEST_CASE("rahm ratio examples") {
  auto c = base_config(5);
  c.epsilon = "pow:1";
  c.series_R = 2;
  c.t_grid = TGrid::single(0.5);
  const auto r = run_rahm_ratio(c);
  const double rho = 1.0 / t_star(1);
  const double m = std::log2(2.0 + rho) * EpsilonFunction::pow(1)(rho);
  CHECK(r[0].rhs == doctest::Approx(m / 0.5).epsilon(1e-9));
  CHECK(r[0].lhs == doctest::Approx(1.0));
  CHECK(r[0].epsilon == "pow:1");
  // rhs is linear in ‖f‖₁
  c.function = "const:3";
  c.t_grid = TGrid::single(0.5);
  CHECK(run_rahm_ratio(c)[0].rhs == doctest::Approx(3.0 * m / 0.5).epsilon(1e-9));
  c.function = "const:0";
  CHECK(run_rahm_ratio(c)[0].ratio == 0.0);
}

TEST_CASE("tmbs weak examples") {
  auto c = base_config(6);
  c.bmo = "haar";
  c.function = "const:2";
  c.epsilon = "const:1";
  c.series_R = 0;
  c.exact_weak = true;
  const auto r = run_tmbs_weak(c);
  CHECK(r.lhs == doctest::Approx(2.0));
  const double ent = std::log2(2.0 + 1.0 / t_star(2)) / t_star(1);
  CHECK(r.rhs == doctest::Approx(2.0 * ent).epsilon(1e-8));
  CHECK(r.bmo == "haar");

  c.bmo = "martingale:1:0";
  const auto zero = run_tmbs_weak(c);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.ratio == 0.0);

  c.bmo = "haar";
  c.function = "const:0";
  CHECK(run_tmbs_weak(c).ratio == 0.0);
}

TEST_CASE("tmbs rejects a family that violates the α hypothesis") {
  auto c = base_config(8);
  c.function = "spine";
  c.sparse_ratio = 3.0;
  try {
    run_tmbs_weak(c);
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("cube 0:") != std::string::npos);
  }
  c.sparse_ratio.reset();
  CHECK_NOTHROW(run_tmbs_weak(c));
}

TEST_CASE("t0m ratio examples") {
  auto c = base_config(5);
  c.bmo = "haar";
  c.t_grid = TGrid::single(0.5);
  const auto r = run_t0m_ratio(c);
  CHECK(r[0].lhs == doctest::Approx(1.0));
  CHECK(r[0].rhs == doctest::Approx(oracle::phik(2.0, 1) / t_star(1)).epsilon(1e-9));
  c.t_grid = TGrid::single(1e6);
  CHECK(run_t0m_ratio(c)[0].ratio == 0.0);
  c.bmo = "martingale:3:0";
  c.t_grid = TGrid::parse("0.01:10:4");
  for (const auto& row : run_t0m_ratio(c)) CHECK(row.ratio == 0.0);
}

TEST_CASE("main theorem examples") {
  auto c = base_config(8);
  c.bmo = "logdist";
  c.weight = "power:0.6";
  c.function = "random";
  c.t_grid = TGrid::parse("0.01:100:9");
  ExperimentCache cache;
  const auto dominating = run_main_theorem(c, &cache);

  // mode (b) contains T^{m,m}, so its level sets dominate those of T^{m,m} alone
  const GridFunction b = cache.symbol(c.bmo, c.level).values();
  const GridFunction f = cache.function(c.function, c.level, c.seed).abs();
  const auto& fam = cache.family(c.function, c.level, c.seed, c.commutator_ratio());
  const GridFunction tmm = sparse_commutator_apply(fam, b, f, 1, 1);
  const GridFunction& w = cache.weight(c.weight, c.level, c.seed);
  for (const auto& row : dominating) {
    double tmm_measure = 0.0;
    for (std::size_t i = 0; i < tmm.size(); ++i)
      if (tmm[i] > row.t) tmm_measure += w[i] * tmm.cell_width();
    CHECK(row.lhs >= tmm_measure - 1e-12);
  }

  c.epsilon = "const:1";
  c.series_R = 10;
  const auto r10 = run_main_theorem(c);
  c.series_R = 0;
  const auto r0 = run_main_theorem(c);
  REQUIRE(r0.size() == r10.size());
  for (std::size_t i = 0; i < r0.size(); ++i) {
    CHECK(r10[i].rhs == doctest::Approx(11.0 * r0[i].rhs).epsilon(1e-12));
    CHECK(r10[i].ratio <= r0[i].ratio);
  }

  c.mode = CommutatorMode::Direct;
  const auto direct = run_main_theorem(c);
  CHECK(direct[0].experiment == "main-direct");
  c.bmo = "martingale:2:0";
  for (const auto& row : run_main_theorem(c)) CHECK(row.ratio == 0.0);
  c.mode = CommutatorMode::Dominating;
  for (const auto& row : run_main_theorem(c)) CHECK(row.ratio == 0.0);
}

TEST_CASE("domination experiment") {
  auto c = base_config(7);
  c.function = "random";
  c.bmo = "martingale:4:0";
  const auto r = run_domination(c);
  CHECK(r.lhs == 0.0);
  CHECK(r.rhs == 1.0);
  c.bmo = "haar";
  CHECK(std::isfinite(run_domination(c).lhs));
}

TEST_CASE("weak norms against brute force") {
  const int J = 6;
  std::vector<double> gv(64), wv(64);
  for (std::size_t i = 0; i < 64; ++i) {
    gv[i] = static_cast<double>((i * 37) % 11) * 0.5;
    wv[i] = 1.0 + static_cast<double>(i % 3);
  }
  const GridFunction g(J, gv), w(J, wv);
  double best = 0.0;
  for (double v : gv) {
    double mass = 0.0;
    for (std::size_t i = 0; i < 64; ++i)
      if (gv[i] >= v) mass += wv[i] / 64.0;
    best = std::max(best, v * mass);
  }
  CHECK(weak_norm_exact(g, w).first == doctest::Approx(best).epsilon(1e-14));
  // the grid version never exceeds the exact supremum
  const auto ts = TGrid::parse("0.01:10:200").values(1.0);
  CHECK(weak_norm_on_grid(g, w, ts).first <= best * (1.0 + 1e-14));
  CHECK(weak_norm_exact(GridFunction::zeros(J), w).first == 0.0);
}

TEST_CASE("experiment dispatch") {
  auto c = base_config(4);
  c.t_grid = TGrid::parse("0.5:2:3");
  for (const auto& name : {"fs", "perez", "rahm", "t0m", "main", "main-direct"}) CHECK(run_experiment(name, c).size() == 3);
  CHECK(run_experiment("tmbs", c).size() == 1);
  CHECK(run_experiment("domination", c).size() == 1);
  CHECK_THROWS_AS(run_experiment("nope", c), UsageError);
  CHECK(experiment_uses_symbol("main"));
  CHECK(!experiment_uses_symbol("fs"));
  CHECK(experiment_uses_epsilon("rahm"));
  CHECK(!experiment_uses_epsilon("t0m"));
  c.m = 0;
  CHECK_THROWS_AS(run_tmbs_weak(c), ConfigError);
  c.m = 1;
  c.series_R = -1;
  CHECK_THROWS_AS(run_fs_ratio(c), ConfigError);
}

TEST_CASE("T^{m,m} weak-type constant is bounded and resolution stable") {
  const auto r = properties::tmbs_theorem(8, 10, 12, 1);
  INFO(r.to_json().dump());
  CHECK(r.passed);
}
