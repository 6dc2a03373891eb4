// entropy-fs: command line front end for the entropy-bump weighted-inequality
// experiments. Exit codes: 0 success, 1 assertion failure, 2 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "entropy_fs/bmo.hpp"
#include "entropy_fs/errors.hpp"
#include "entropy_fs/harness.hpp"
#include "entropy_fs/maximal.hpp"
#include "entropy_fs/orlicz.hpp"
#include "entropy_fs/properties.hpp"
#include "entropy_fs/simd.hpp"
#include "entropy_fs/sparse.hpp"
#include "entropy_fs/specs.hpp"
#include "entropy_fs/sweep.hpp"

namespace {

constexpr int kExitAssertion = 1;
constexpr int kExitUsage = 2;

struct Options {
  efs::ExperimentConfig cfg;
  std::string t_grid;
  bool t_abs = false;
  std::string out = "csv";
  std::string output;
  std::string lattices = "0,1,2";
  std::string model = "sparse";
  std::string mode = "b";
  double tol = 0.0;
  double ratio = 0.0;
  bool timing = false;
};

/// Writes to --output when given, else stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw efs::UsageError("cannot open output `" + path + "`");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

efs::DyadicCube parse_cube(const std::string& s) {
  efs::DyadicCube q{};
  char c1 = 0, c2 = 0;
  std::istringstream in(s);
  if (!(in >> q.lattice >> c1 >> q.level >> c2 >> q.index) || c1 != ':' || c2 != ':' || !in.eof())
    throw efs::UsageError("cube `" + s + "` must be LATTICE:LEVEL:INDEX");
  if (q.lattice < 0 || q.lattice > 2 || q.level < 0 || q.index < 0 || q.index >= (std::int64_t{1} << q.level))
    throw efs::UsageError("cube `" + s + "` is out of range");
  return q;
}

efs::LatticeSet parse_lattices(const std::string& s) {
  efs::LatticeSet out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item != "0" && item != "1" && item != "2") throw efs::UsageError("lattice `" + item + "` must be 0, 1 or 2");
    out.push_back(item[0] - '0');
  }
  if (out.empty()) throw efs::UsageError("--lattices needs at least one lattice");
  return out;
}

/// Folds the string-valued flags into the experiment config.
efs::ExperimentConfig finalize(Options& o) {
  efs::ExperimentConfig c = o.cfg;
  if (!o.t_grid.empty()) c.t_grid = efs::TGrid::parse(o.t_grid);
  c.t_grid.relative = !o.t_abs;
  if (o.tol > 0.0) c.tol.rel_tol = o.tol;
  if (o.ratio > 0.0) c.sparse_ratio = o.ratio;
  c.lattices = parse_lattices(o.lattices);
  c.model = o.model == "martingale" ? efs::ModelOperator::Martingale : efs::ModelOperator::Sparse;
  c.mode = o.mode == "a" ? efs::CommutatorMode::Direct : efs::CommutatorMode::Dominating;
  try {
    c.validate();
  } catch (const efs::ConfigError& e) {
    throw efs::UsageError(e.what());
  }
  return c;
}

void print_rows(Options& o, const std::vector<efs::RatioReport>& rows) {
  Sink sink(o.output);
  if (o.out == "json")
    sink.stream() << efs::summarize(rows).dump(2) << '\n';
  else
    efs::write_csv(sink.stream(), rows, o.timing);
}

int run_selftest() {
  namespace p = efs::properties;
  const std::vector<std::pair<std::string, std::function<p::PropertyResult()>>> suites = {
      {"luxemburg oracle", [] { return p::luxemburg_oracle(8, 50); }},
      {"generalized Hölder", [] { return p::generalized_holder(8, 100); }},
      {"submultiplicativity", [] { return p::submultiplicativity(40); }},
      {"entropy density", [] { return p::entropy_density({6, 8}); }},
      {"subset-rho", [] { return p::subset_rho_bound(6, 20); }},
      {"subset-entropy", [] { return p::subset_entropy_constant(6, 8, 20); }},
      {"John–Nirenberg", [] { return p::john_nirenberg(8); }},
      {"sparse exactness", [] { return p::sparse_exactness({6, 8}, 3); }},
      {"reduction inequality", [] { return p::reduction_inequality(8); }},
      {"determinism", [] { return p::determinism(6); }},
  };
  std::printf("kernels: %s\n", std::string(efs::simd::active_kernels().name).c_str());
  int failed = 0;
  for (const auto& [title, run] : suites) {
    const auto r = p::timed(run);
    failed += r.passed ? 0 : 1;
    std::printf("%s %s (checked %zu, violations %zu, %.2f s)\n", r.passed ? "PASS" : "FAIL", title.c_str(), r.checked,
                r.violations, r.seconds);
    for (const auto& f : r.findings) std::printf("     %s\n", f.c_str());
  }
  return failed == 0 ? 0 : kExitAssertion;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy-bump weighted inequality experiments on dyadic grids"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  auto& c = o.cfg;
  app.add_option("--level", c.level, "grid level J (2^J cells)")->check(CLI::Range(1, efs::kMaxLevel));
  app.add_option("--m", c.m, "commutator order m")->check(CLI::NonNegativeNumber);
  app.add_option("--weight", c.weight, "weight spec");
  app.add_option("--function", c.function, "function spec");
  app.add_option("--bmo", c.bmo, "symbol spec: haar, logdist, martingale:SEED:DEPTH");
  app.add_option("--epsilon", c.epsilon, "ε spec: const:c, logpow:δ, pow:δ");
  app.add_option("--t-grid", o.t_grid, "thresholds LO:HI:N, relative to ⟨|f|⟩ unless --t-abs");
  app.add_flag("--t-abs", o.t_abs, "treat --t-grid endpoints as absolute");
  app.add_option("--series-R", c.series_R, "truncation R of Σ 1/ε(2^{2^r})")->check(CLI::NonNegativeNumber);
  app.add_option("--ratio", o.ratio, "sparse stopping ratio (> 1)");
  app.add_option("--seed", c.seed, "corpus seed");
  app.add_option("--out", o.out, "output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output", o.output, "output file (default stdout)");
  app.add_option("--tol", o.tol, "relative tolerance of Luxemburg bisection")->check(CLI::PositiveNumber);
  app.add_option("--rho", c.rho, "exponent ρ of the L(log L)^ρ bump")->check(CLI::PositiveNumber);
  app.add_option("--model", o.model, "model operator")->check(CLI::IsMember({"sparse", "martingale"}));
  app.add_option("--mode", o.mode, "main theorem left side: a direct, b dominating sum")
      ->check(CLI::IsMember({"a", "b"}));
  app.add_option("--lattices", o.lattices, "comma separated lattice indices");
  app.add_flag("--exact-weak", c.exact_weak, "exact weak norm instead of the t-grid sup");
  app.add_flag("--timing", o.timing, "fill the wall_ms column");

  // luxemburg
  auto* lux = app.add_subcommand("luxemburg", "Luxemburg norm of --function on a cube");
  std::string young = "phik:1", cube = "0:0:0";
  lux->add_option("--young", young, "Young function: power:p, phik:k, llogl:γ, loglog:γ, exppow:β");
  lux->add_option("--cube", cube, "LATTICE:LEVEL:INDEX");

  // maximal
  auto* mx = app.add_subcommand("maximal", "maximal function of --weight as a grid function");
  std::string kind = "hl";
  int k = 1;
  mx->add_option("--kind", kind, "hl, orlicz or entropy")->check(CLI::IsMember({"hl", "orlicz", "entropy"}));
  mx->add_option("--young", young, "bump for orlicz/entropy");
  mx->add_option("--k", k, "entropy density order")->check(CLI::NonNegativeNumber);

  // rho
  auto* rho = app.add_subcommand("rho", "entropy densities ρ_w(Q) and ρ_{k,w}(Q)");
  rho->add_option("--cube", cube, "LATTICE:LEVEL:INDEX");
  rho->add_option("--k", k, "order k")->check(CLI::NonNegativeNumber);

  // sparse
  auto* sp = app.add_subcommand("sparse", "sparse families");
  sp->require_subcommand(1);
  auto* sp_build = sp->add_subcommand("build", "stopping-time family of |--function|");
  auto* sp_apply = sp->add_subcommand("apply", "apply T^{h,m}_{b,S} to |--function|");
  std::string family_path;
  int h = 0;
  sp_apply->add_option("--family", family_path, "family file (default: build from --function)");
  sp_apply->set_help_flag("--help", "Print this help message and exit");
  sp_apply->add_option("--h", h, "inner power h, 0 <= h <= m")->check(CLI::NonNegativeNumber);

  // verify
  auto* vf = app.add_subcommand("verify", "evaluate one inequality and print its ratio rows");
  std::string experiment;
  vf->add_option("experiment", experiment, "fs, perez, rahm, tmbs, t0m, main, domination")
      ->required()
      ->check(CLI::IsMember({"fs", "perez", "rahm", "tmbs", "t0m", "main", "domination"}));

  // sweep
  auto* sw = app.add_subcommand("sweep", "corpus sweep from a config file");
  std::string config_path, summary_path;
  sw->add_option("--config", config_path, "sweep config")->required();
  sw->add_option("--summary", summary_path, "also write the JSON summary here");

  auto* st = app.add_subcommand("selftest", "reduced-scale property suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*st) return run_selftest();

    if (*sw) {
      efs::SweepConfig cfg = efs::load_sweep_config(config_path);
      cfg.timing = cfg.timing || o.timing;
      const auto rows = efs::run_sweep(cfg);
      {
        Sink sink(o.output);
        if (o.out == "json")
          sink.stream() << efs::summarize(rows).dump(2) << '\n';
        else
          efs::write_csv(sink.stream(), rows, cfg.timing);
      }
      if (!summary_path.empty()) {
        std::ofstream js(summary_path);
        if (!js) throw efs::UsageError("cannot open summary `" + summary_path + "`");
        js << efs::summarize(rows).dump(2) << '\n';
      }
      std::size_t infinite = 0;
      for (const auto& r : rows) infinite += r.infinite ? 1 : 0;
      if (infinite) {
        std::fprintf(stderr, "entropy-fs: %zu rows have rhs = 0 < lhs\n", infinite);
        return kExitAssertion;
      }
      return 0;
    }

    const efs::ExperimentConfig cfg = finalize(o);

    if (*lux) {
      const auto f = efs::make_grid_function(cfg.function, cfg.level, cfg.seed);
      const auto a = efs::YoungFunction::parse(young);
      const auto q = parse_cube(cube);
      const double norm = efs::luxemburg_norm(f, q, a, cfg.tol);
      Sink sink(o.output);
      if (o.out == "json")
        sink.stream() << nlohmann::ordered_json{{"cube", efs::to_string(q)}, {"young", a.to_string()}, {"norm", norm}}.dump()
                      << '\n';
      else
        sink.stream() << "cube,young,norm\n" << efs::to_string(q) << ',' << a.to_string() << ','
                      << efs::format_number(norm) << '\n';
      return 0;
    }

    if (*mx) {
      const auto w = efs::make_weight(cfg.weight, cfg.level, cfg.seed);
      efs::GridFunction out = efs::GridFunction::zeros(cfg.level);
      if (kind == "hl")
        out = efs::dyadic_maximal(w, cfg.lattices);
      else if (kind == "orlicz")
        out = efs::orlicz_maximal(w, efs::YoungFunction::parse(young), cfg.lattices, cfg.tol);
      else
        out = efs::entropy_maximal(w, {efs::YoungFunction::parse(young), k, efs::EpsilonFunction::parse(cfg.epsilon)},
                                   cfg.lattices, cfg.tol);
      Sink sink(o.output);
      efs::write_grid_function(sink.stream(), out);
      return 0;
    }

    if (*rho) {
      const auto w = efs::make_weight(cfg.weight, cfg.level, cfg.seed);
      const auto q = parse_cube(cube);
      const double r0 = efs::rho_rahm(w, q), rk = efs::rho_k(w, q, k, cfg.tol);
      Sink sink(o.output);
      if (o.out == "json")
        sink.stream() << nlohmann::ordered_json{{"cube", efs::to_string(q)}, {"rho_rahm", r0}, {"k", k}, {"rho_k", rk}}.dump()
                      << '\n';
      else
        sink.stream() << "cube,rho_rahm,k,rho_k\n" << efs::to_string(q) << ',' << efs::format_number(r0) << ',' << k
                      << ',' << efs::format_number(rk) << '\n';
      return 0;
    }

    if (*sp_build) {
      const auto f = efs::make_grid_function(cfg.function, cfg.level, cfg.seed).abs();
      const auto s = efs::build_sparse_from_function(f, cfg.sparse_ratio.value_or(2.0));
      Sink sink(o.output);
      efs::write_family(sink.stream(), s);
      return 0;
    }

    if (*sp_apply) {
      if (h > cfg.m) throw efs::UsageError("--h must not exceed --m");
      const auto f = efs::make_grid_function(cfg.function, cfg.level, cfg.seed).abs();
      const auto b = efs::generate_symbol(efs::SymbolSpec::parse(cfg.bmo), cfg.level);
      std::optional<efs::CarlesonFamily> s;
      if (family_path.empty()) {
        s = efs::build_sparse_from_function(f, cfg.sparse_ratio.value_or(2.0));
      } else {
        std::ifstream in(family_path);
        if (!in) throw efs::UsageError("cannot open family `" + family_path + "`");
        s = efs::read_family(in);
      }
      Sink sink(o.output);
      efs::write_grid_function(sink.stream(), efs::sparse_commutator_apply(*s, b, f, h, cfg.m));
      return 0;
    }

    if (*vf) {
      const auto rows = efs::run_experiment(experiment, cfg);
      print_rows(o, rows);
      for (const auto& r : rows)
        if (r.infinite) {
          std::fprintf(stderr, "entropy-fs: %s has rhs = 0 < lhs at t = %g\n", experiment.c_str(), r.t);
          return kExitAssertion;
        }
      if (experiment == "domination" && !std::isfinite(rows.front().lhs)) {
        std::fprintf(stderr, "entropy-fs: pointwise domination fails\n");
        return kExitAssertion;
      }
      return 0;
    }
  } catch (const efs::UsageError& e) {
    std::fprintf(stderr, "entropy-fs: usage: %s\n", e.what());
    return kExitUsage;
  } catch (const efs::ConfigError& e) {
    std::fprintf(stderr, "entropy-fs: config: %s\n", e.what());
    return kExitUsage;
  } catch (const efs::DomainError& e) {
    std::fprintf(stderr, "entropy-fs: domain: %s\n", e.what());
    return kExitUsage;
  } catch (const efs::DegenerateInputError& e) {
    std::fprintf(stderr, "entropy-fs: degenerate input: %s\n", e.what());
    return kExitUsage;
  } catch (const efs::ResolutionError& e) {
    std::fprintf(stderr, "entropy-fs: resolution: %s\n", e.what());
    return kExitUsage;
  } catch (const efs::Error& e) {
    std::fprintf(stderr, "entropy-fs: %s\n", e.what());
    return kExitAssertion;
  }
  return 0;
}
