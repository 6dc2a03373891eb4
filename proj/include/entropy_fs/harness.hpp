#pragma once

// Experiment driver: evaluates the left and right sides of each weighted
// inequality on a corpus member and records their ratio.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entropy_fs/bmo.hpp"
#include "entropy_fs/grid.hpp"
#include "entropy_fs/maximal.hpp"
#include "entropy_fs/orlicz.hpp"
#include "entropy_fs/sparse.hpp"

namespace efs {

/// Geometric threshold grid. With `relative` the endpoints are multiples of
/// ⟨|f|⟩_{[0,1)} (or of 1 when f ≡ 0).
struct TGrid {
  double lo = 1e-4;
  double hi = 1e4;
  int steps = 64;
  bool relative = true;

  /// `LO:HI:N`
  static TGrid parse(std::string_view spec);
  static TGrid single(double t) { return {t, t, 1, false}; }
  std::vector<double> values(double base) const;
  void validate() const;
};

enum class ModelOperator { Sparse, Martingale };
enum class CommutatorMode { Direct, Dominating };  // (a) T_b^m f, (b) Σ_h T^{h,m}_{b,S} f

struct ExperimentConfig {
  int level = 10;
  int m = 1;
  std::string weight = "const";
  std::string function = "const";
  std::string bmo = "haar";
  std::string epsilon = "logpow:1";
  TGrid t_grid;
  int series_R = 20;
  std::optional<double> sparse_ratio;  // unset: 2 for perez/rahm, 2·56^m+1 for commutators
  std::uint64_t seed = 1;
  ToleranceConfig tol;
  double rho = 1.0;                     // L(log L)^ρ bump of run_perez_ratio
  ModelOperator model = ModelOperator::Sparse;
  CommutatorMode mode = CommutatorMode::Dominating;
  bool exact_weak = false;              // exact sup over output values instead of the t-grid
  LatticeSet lattices = kAllLattices;

  void validate() const;
  double commutator_ratio() const;
};

struct RatioReport {
  std::string experiment;
  int level = 0;
  int m = 0;
  std::string weight;
  std::string function;
  std::string bmo;      // "-" when the experiment has no symbol
  std::string epsilon;  // "-" when the experiment has no ε
  double t = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;   // 0 for 0/0, +inf when rhs = 0 < lhs
  bool infinite = false;
  double wall_ms = 0.0;
};

/// lhs/rhs with the 0/0 -> 0 and x/0 -> ∞ conventions.
double ratio_of(double lhs, double rhs);

/// sup_t t·w({g > t}) over the given thresholds; returns (value, argmax t).
std::pair<double, double> weak_norm_on_grid(const GridFunction& g, const GridFunction& w,
                                            const std::vector<double>& ts);
/// Exact sup_t t·w({g > t}) = max over output values v of v·w({g >= v}).
std::pair<double, double> weak_norm_exact(const GridFunction& g, const GridFunction& w);

/// Memoizes corpus members and the expensive maximal functions, keyed by spec
/// strings, so sweeps evaluate each weight's entropy table once.
class ExperimentCache {
 public:
  const GridFunction& weight(const std::string& spec, int J, std::uint64_t seed);
  const GridFunction& function(const std::string& spec, int J, std::uint64_t seed);
  const BmoSymbol& symbol(const std::string& spec, int J);
  const GridFunction& hl_maximal(const std::string& spec, int J, std::uint64_t seed,
                                 const LatticeSet& lattices, bool is_weight);
  const GridFunction& orlicz_maximal(const std::string& weight_spec, int J, std::uint64_t seed,
                                     const YoungFunction& a, const LatticeSet& lattices,
                                     const ToleranceConfig& tol);
  const EntropyTable& entropy_table(const std::string& weight_spec, int J, std::uint64_t seed,
                                    const YoungFunction& a, int k, const LatticeSet& lattices,
                                    const ToleranceConfig& tol);
  const CarlesonFamily& family(const std::string& function_spec, int J, std::uint64_t seed,
                               double ratio);

 private:
  std::map<std::string, GridFunction> grids_;
  std::map<std::string, BmoSymbol> symbols_;
  std::map<std::string, std::unique_ptr<EntropyTable>> tables_;
  std::map<std::string, CarlesonFamily> families_;
};

std::vector<RatioReport> run_fs_ratio(const ExperimentConfig& cfg, ExperimentCache* cache = nullptr);
std::vector<RatioReport> run_perez_ratio(const ExperimentConfig& cfg, ExperimentCache* cache = nullptr);
std::vector<RatioReport> run_rahm_ratio(const ExperimentConfig& cfg, ExperimentCache* cache = nullptr);
RatioReport run_tmbs_weak(const ExperimentConfig& cfg, ExperimentCache* cache = nullptr);
std::vector<RatioReport> run_t0m_ratio(const ExperimentConfig& cfg, ExperimentCache* cache = nullptr);
std::vector<RatioReport> run_main_theorem(const ExperimentConfig& cfg, ExperimentCache* cache = nullptr);
/// Minimal pointwise constant c of the martingale-commutator domination,
/// reported as lhs = ratio = c with rhs = 1.
RatioReport run_domination(const ExperimentConfig& cfg, ExperimentCache* cache = nullptr);

/// Dispatch by name: fs, perez, rahm, tmbs, t0m, main, domination.
std::vector<RatioReport> run_experiment(std::string_view name, const ExperimentConfig& cfg,
                                        ExperimentCache* cache = nullptr);
bool experiment_uses_symbol(std::string_view name);
bool experiment_uses_epsilon(std::string_view name);

}  // namespace efs
