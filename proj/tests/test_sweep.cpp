#include <cmath>
#include <sstream>

#include "doctest.h"
#include "entropy_fs/errors.hpp"
#include "entropy_fs/sweep.hpp"

using namespace efs;

namespace {

SweepConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_sweep_config(in);
}

std::string csv(const SweepConfig& cfg) {
  std::ostringstream out;
  write_csv(out, run_sweep(cfg), cfg.timing);
  return out.str();
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const UsageError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = parse(
      "# comment\n"
      "experiments = fs, tmbs   # trailing\n"
      "levels = 6,8\n"
      "m = 1\n"
      "weights = const, power:0.3\n"
      "functions = spine\n"
      "bmo = haar\n"
      "epsilon = logpow:1, const:1\n"
      "t_grid = 0.1:10:3\n"
      "t_abs = true\n"
      "series_R = 4\n"
      "ratio = 200\n"
      "seed = 9\n"
      "rho = 0.5\n"
      "tol = 1e-9\n"
      "model = martingale\n"
      "mode = a\n"
      "exact_weak = yes\n"
      "lattices = 0, 2\n"
      "timing = false\n");
  CHECK(c.experiments == std::vector<std::string>{"fs", "tmbs"});
  CHECK(c.levels == std::vector<int>{6, 8});
  CHECK(c.weights.size() == 2);
  CHECK(c.epsilons == std::vector<std::string>{"logpow:1", "const:1"});
  CHECK(c.base.t_grid.steps == 3);
  CHECK(!c.base.t_grid.relative);
  CHECK(c.base.series_R == 4);
  CHECK(c.base.sparse_ratio == 200.0);
  CHECK(c.base.seed == 9);
  CHECK(c.base.rho == 0.5);
  CHECK(c.base.tol.rel_tol == 1e-9);
  CHECK(c.base.model == ModelOperator::Martingale);
  CHECK(c.base.mode == CommutatorMode::Direct);
  CHECK(c.base.exact_weak);
  CHECK(c.base.lattices == LatticeSet{0, 2});

  const auto d = parse("");
  CHECK(d.experiments.size() == 7);
  CHECK(d.weights == SweepConfig::defaults().weights);
}

TEST_CASE("config errors carry the line number") {
  CHECK(error_of("levels = 8\nnonsense\n").find("config line 2") != std::string::npos);
  CHECK(error_of("\n\nfoo = 1\n").find("config line 3") != std::string::npos);
  CHECK(error_of("levels = 8\nlevels = 9\n").find("duplicate") != std::string::npos);
  CHECK(error_of("levels = x\n").find("config line 1") != std::string::npos);
  CHECK(error_of("experiments = fs, bogus\n").find("bogus") != std::string::npos);
  CHECK(error_of("epsilon = pow:0\n").find("config line 1") != std::string::npos);
  CHECK(error_of("t_grid = 1:2\n").find("config line 1") != std::string::npos);
  CHECK(error_of("lattices = 3\n").find("config line 1") != std::string::npos);
  CHECK(error_of("exact_weak = maybe\n").find("config line 1") != std::string::npos);
  CHECK(!error_of("levels = 0\n").empty());
  CHECK_THROWS_AS(load_sweep_config("/nonexistent/sweep.cfg"), UsageError);
}

TEST_CASE("empty sweep lists give a header-only CSV") {
  CHECK(csv(parse("weights =\n")) == std::string(kCsvHeader) + "\n");
  CHECK(csv(parse("experiments =\n")) == std::string(kCsvHeader) + "\n");
  CHECK(summarize({}).empty());
}

TEST_CASE("row count of a small fs sweep") {
  const auto c = parse("experiments = fs\nlevels = 6\nweights = const, twovalued\nfunctions = indicator\nbmo = haar\nt_grid = 0.5:2:3\n");
  const auto rows = run_sweep(c);
  CHECK(rows.size() == 6);
  const auto text = csv(c);
  CHECK(lines(text) == 7);
  CHECK(text.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
  CHECK(text.find("fs,6,1,const,indicator,-,-,") != std::string::npos);
  CHECK(text.find(",NA\n") != std::string::npos);
}

TEST_CASE("symbol and epsilon axes multiply only where used") {
  const auto c = parse(
      "experiments = fs, rahm, t0m, main\nlevels = 5\nweights = const\nfunctions = random\n"
      "bmo = haar, logdist\nepsilon = logpow:1, const:1, pow:0.5\nt_grid = 0.5:2:2\n");
  const auto rows = run_sweep(c);
  std::map<std::string, int> per;
  for (const auto& r : rows) ++per[r.experiment];
  CHECK(per["fs"] == 2);
  CHECK(per["rahm"] == 6);
  CHECK(per["t0m"] == 4);
  CHECK(per["main"] == 12);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.75) == "0.75");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(3.0) == "3");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("timing column") {
  auto c = parse("experiments = fs\nlevels = 4\nweights = const\nfunctions = const\nt_grid = 1:1:1\ntiming = true\n");
  const auto text = csv(c);
  CHECK(text.find(",NA") == std::string::npos);
}

TEST_CASE("summary structure and drift pairs") {
  const auto c = parse("experiments = fs, tmbs\nlevels = 6, 8, 10\nweights = power:0.6\nfunctions = indicator, random\n"
                       "bmo = logdist\nt_grid = 0.01:100:9\n");
  const auto rows = run_sweep(c);
  const auto s = summarize(rows);
  REQUIRE(s.contains("fs"));
  REQUIRE(s.contains("tmbs"));
  for (const auto& [name, e] : s.items()) {
    CHECK(e["max_ratio"].is_number());
    CHECK(e["argmax_params"].contains("J"));
    CHECK(e["argmax_params"].contains("t"));
    CHECK(e["drift_J_pairs"].size() == 2);
    CHECK(e["drift_J_pairs"][0]["J"] == 6);
    CHECK(e["drift_J_pairs"][0]["J2"] == 8);
    double best = 0.0;
    for (const auto& r : rows)
      if (r.experiment == name) best = std::max(best, r.ratio);
    CHECK(e["max_ratio"].get<double>() == best);
  }
  CHECK(s["fs"]["rows"] == 3 * 2 * 9);
  CHECK(s["tmbs"]["rows"] == 3 * 2);
}

TEST_CASE("sweeps are deterministic") {
  const auto c = parse("experiments = fs, perez, rahm, tmbs, t0m, main, domination\nlevels = 6\n"
                       "weights = lognormal, power:0.9\nfunctions = random, spine\nbmo = martingale:7:6\nt_grid = 0.01:100:5\n");
  CHECK(csv(c) == csv(c));
  CHECK(summarize(run_sweep(c)).dump() == summarize(run_sweep(c)).dump());
}

TEST_CASE("full default corpus at J=10 has finite max ratios for all experiments") {
  SweepConfig c = SweepConfig::defaults();
  c.levels = {10};
  c.base.t_grid = TGrid::parse("0.001:1000:16");
  const auto rows = run_sweep(c);
  const auto s = summarize(rows);
  for (const auto& name : c.experiments) {
    INFO(name);
    REQUIRE(s.contains(name));
    CHECK(s[name]["max_ratio"].is_number());
    CHECK(std::isfinite(s[name]["max_ratio"].get<double>()));
    CHECK(s[name]["infinite_rows"] == 0);
  }
}
