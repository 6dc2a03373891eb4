#pragma once

// Corpus sweeps: config parsing, row generation, CSV and JSON summaries.
//
// Config format: one `key = value` per line, `#` starts a comment, list values
// are comma separated. Keys: experiments, levels, m, weights, functions, bmo,
// epsilon, t_grid, series_R, ratio, seed, rho, tol, model, mode, exact_weak,
// lattices, timing. Absent list keys take the default corpus; a key given with
// an empty value is an empty list.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "entropy_fs/harness.hpp"
#include "json.hpp"

namespace efs {

struct SweepConfig {
  std::vector<std::string> experiments;
  std::vector<int> levels;
  std::vector<int> ms;
  std::vector<std::string> weights;
  std::vector<std::string> functions;
  std::vector<std::string> symbols;
  std::vector<std::string> epsilons;
  ExperimentConfig base;  // scalar settings shared by every item
  bool timing = false;

  /// Default corpus, all experiments, J = 10, m = 1, ε = logpow:1.
  static SweepConfig defaults();
};

SweepConfig parse_sweep_config(std::istream& in);
SweepConfig load_sweep_config(const std::filesystem::path& path);

/// Rows in declared order: experiment, J, m, weight, function, symbol, ε, t.
/// Axes an experiment does not use are iterated once.
std::vector<RatioReport> run_sweep(const SweepConfig& cfg, ExperimentCache* cache = nullptr);

inline constexpr const char* kCsvHeader =
    "experiment,J,m,weight,function,bmo,epsilon,t,lhs,rhs,ratio,wall_ms";

/// Shortest round-trip decimal; "inf"/"nan" for non-finite values.
std::string format_number(double v);

void write_csv(std::ostream& out, const std::vector<RatioReport>& rows, bool timing);

/// {experiment -> {max_ratio, argmax_params, drift_J_pairs, rows, infinite_rows}}.
/// max_ratio is taken over finite rows; drift pairs compare J and J+2.
nlohmann::ordered_json summarize(const std::vector<RatioReport>& rows);

}  // namespace efs
