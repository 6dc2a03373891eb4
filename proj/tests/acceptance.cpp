// Acceptance suite: one PASS/FAIL line per criterion, recorded constants in a
// JSON summary (path from argv[1], default acceptance_summary.json).

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "entropy_fs/properties.hpp"
#include "entropy_fs/simd.hpp"

namespace p = efs::properties;

struct Criterion {
  int id;
  std::string title;
  std::function<p::PropertyResult()> run;
  double time_limit_s = 0.0;  // 0: no limit
};

int main(int argc, char** argv) {
  const std::string summary_path = argc > 1 ? argv[1] : "acceptance_summary.json";
  const std::vector<Criterion> criteria = {
      {1, "Luxemburg oracle equivalence", [] { return p::luxemburg_oracle(10, 200); }, 30.0},
      {2, "Generalized Hölder", [] { return p::generalized_holder(10, 500); }},
      {3, "Submultiplicativity of Φ_k", [] { return p::submultiplicativity(100); }},
      {4, "Entropy density laws", [] { return p::entropy_density({8, 10, 12}); }},
      {5, "Subset measure bound via ρ_w", [] { return p::subset_rho_bound(8, 50); }, 120.0},
      {6, "Subset entropy constant", [] { return p::subset_entropy_constant(8, 12, 50); }},
      {7, "John–Nirenberg decay", [] { return p::john_nirenberg(12); }},
      {8, "Sparse exactness", [] { return p::sparse_exactness({8, 10, 12}, 5); }},
      {9, "Reduction inequality", [] { return p::reduction_inequality(10); }},
      {10, "T^{m,m}_{b,S} weak-type ratios", [] { return p::tmbs_theorem(10, 12, 14, 1); }, 600.0},
      {11, "Commutator weak-type composite", [] { return p::main_theorem(10, 12, 14, 1); }},
      {12, "Determinism", [] { return p::determinism(8); }},
  };

  nlohmann::ordered_json summary;
  summary["kernels"] = std::string(efs::simd::active_kernels().name);
  int failures = 0;
  for (const auto& c : criteria) {
    p::PropertyResult r = p::timed(c.run);
    bool ok = r.passed;
    if (c.time_limit_s > 0.0 && r.seconds > c.time_limit_s) {
      ok = false;
      r.findings.push_back("runtime " + std::to_string(r.seconds) + " s exceeds " + std::to_string(c.time_limit_s) + " s");
    }
    failures += ok ? 0 : 1;
    std::printf("%s %2d. %s (checked %zu, violations %zu, %.1f s)\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str(),
                r.checked, r.violations, r.seconds);
    for (const auto& f : r.findings) std::printf("       %s\n", f.c_str());
    std::fflush(stdout);
    auto j = r.to_json();
    j["criterion"] = c.id;
    j["passed"] = ok;
    summary["criteria"].push_back(j);
  }
  summary["failures"] = failures;
  std::ofstream(summary_path) << summary.dump(2) << '\n';
  std::printf("%d of %zu criteria passed; summary in %s\n", static_cast<int>(criteria.size()) - failures,
              criteria.size(), summary_path.c_str());
  return failures == 0 ? 0 : 1;
}
