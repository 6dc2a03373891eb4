#pragma once

// Property suites over seeded corpora. Each check counts the instances it
// tested and the violations it found, and records the empirical constants it
// measured. The acceptance binary runs them at full scale; `entropy-fs
// selftest` runs them at reduced scale.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

namespace efs::properties {

struct PropertyResult {
  std::string name;
  bool passed = true;
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::vector<std::string> findings;  // first violations and reported observations
  nlohmann::ordered_json record = nlohmann::ordered_json::object();
  double seconds = 0.0;

  void violation(const std::string& what);
  void finding(const std::string& what);
  nlohmann::ordered_json to_json() const;
};

/// Runs a check and stores its wall time in `seconds`.
PropertyResult timed(const std::function<PropertyResult()>& run);

/// Bisection Luxemburg norms against the L^p closed form for p ∈ {1,2,3}, and
/// indicator_norm against bisection on indicators. Relative error <= 1e-9.
PropertyResult luxemburg_oracle(int level = 10, int pairs = 200, std::uint64_t seed = 11);

/// ⟨|fg|⟩_Q <= 2‖f‖_{Φ_m,Q}‖g‖_{exp L^{1/m},Q} + 1e-9 for m ∈ {1,2}.
PropertyResult generalized_holder(int level = 10, int pairs = 500, std::uint64_t seed = 12);

/// Φ_k(ab) <= 2^k Φ_k(a)Φ_k(b) on an n×n log grid of [1e-3, 1e3]², k ∈ {1,2,3}.
PropertyResult submultiplicativity(int grid = 100);

/// ρ_k >= 1, ρ_{k+1} >= ρ_k and w -> 7w invariance (tolerance 1e-9) over the
/// default weights and every cube of all lattices, k ∈ {0,..,3}.
PropertyResult entropy_density(const std::vector<int>& levels = {8, 10, 12});

/// Two-sided interval of ρ_w(Q)/ρ_{1,w}(Q) over the default weights; the
/// interval width C must drift < 2x across levels.
PropertyResult rahm_equivalence(const std::vector<int>& levels = {8, 10, 12});

/// Interval [1/C_k, C_k] of ‖w‖_{Φ_k,Q}/((1/|Q|)∫_Q w log^k(e+w/⟨w⟩_Q)) over
/// the default weights, k ∈ {1,2}; C_k must drift < 2x across levels.
PropertyResult entropy_integral_equivalence(const std::vector<int>& levels = {8, 14});

/// sup over corpus symbols and lattice-0 cubes of ‖|b-b_Q|^m‖_{exp L^{1/m},Q}/‖b‖_d^m,
/// m ∈ {1,2}; must be finite.
PropertyResult exp_norm_duality(int level = 10);

/// w(E) <= 16·ρ_w(Q)/log(|Q|/|E|)·w(Q) for every cube and sampled E ⊊ Q.
PropertyResult subset_rho_bound(int level = 8, int subsets = 50, std::uint64_t seed = 15);

/// sup ‖wχ_E‖_{Φ_k,Q}·log(|Q|/|E|) / (log^k(e+log(|Q|/|E|))·‖w‖_{Φ_{k+1},Q})
/// for k ∈ {1,2}: finite and drifting < 2x between the two levels.
PropertyResult subset_entropy_constant(int level_lo = 8, int level_hi = 12, int subsets = 50,
                         std::uint64_t seed = 16);

/// Oscillation level sets of the corpus symbols against e·e^{-λ/(2e‖b‖_d)}
/// (findings) and e·e^{-λ/(8e‖b‖_d)} (failure); records the decay slope.
PropertyResult john_nirenberg(int level = 12);

/// Exact Carleson bounds of built families, band disjointness of the
/// stratification, and stopping-decomposition invariants for t <= t_max.
PropertyResult sparse_exactness(const std::vector<int>& levels = {8, 10, 12}, int t_max = 5);

/// T^{h,m} <= T^{m,m} + T^{0,m} + 1e-9 cell-wise on the corpus, m ∈ {1,2}.
PropertyResult reduction_inequality(int level = 10);

/// Weak-type ratios of T^{m,m}_{b,S} over the default corpus with
/// ε ∈ {logpow:1, pow:1}, R = 20. Records the max at `level_mid` and the
/// drift between `level_lo` and `level_hi`.
PropertyResult tmbs_theorem(int level_lo = 10, int level_mid = 12, int level_hi = 14, int m = 1);

/// Dominating-sum ratios of the composite bound (mode b) with the same corpus
/// and drift rule, plus the pointwise domination constant of the martingale
/// commutator (mode a), which must be finite.
PropertyResult main_theorem(int level_lo = 10, int level_mid = 12, int level_hi = 14, int m = 1);

/// Two independent runs of the same sweep produce byte-identical CSV.
PropertyResult determinism(int level = 8);

}  // namespace efs::properties
