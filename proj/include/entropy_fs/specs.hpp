#pragma once

// Textual specs for corpus members, shared by the CLI and the sweep driver.
//
//   const[:c]              constant c (default 1)
//   power:a                cell averages of x^{-a}, 0 <= a < 1
//   twovalued[:lo:hi]      lo on [0,1/2), hi on [1/2,1) (default 1, 10)
//   lognormal[:sigma]      exp(sigma·Z) on 64 base cells, Z seeded normal (default sigma 1)
//   indicator[:a:b]        χ_[a,b) snapped to cells (default [0,1/2))
//   spine                  2^J χ_[0,2^-J), a unit-mass bump at 0
//   random                 seeded uniform [0,1) on 64 base cells
//   file:PATH              grid function text file (refined if coarser than J)

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "entropy_fs/grid.hpp"

namespace efs {

GridFunction make_grid_function(std::string_view spec, int level_J, std::uint64_t seed);

/// make_grid_function plus the weight check (nonnegative, not identically 0).
GridFunction make_weight(std::string_view spec, int level_J, std::uint64_t seed);

struct DefaultCorpus {
  std::vector<std::string> weights;
  std::vector<std::string> functions;
  std::vector<std::string> symbols;
};

/// Weights {const, x^-a for a in {0.3,0.6,0.9}, two-valued, log-normal},
/// functions {const, indicator, spine, random}, symbols {haar, logdist, martingale}.
const DefaultCorpus& default_corpus();

}  // namespace efs
