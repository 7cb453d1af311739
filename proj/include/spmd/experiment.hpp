#pragma once

#include "spmd/divergences.hpp"
#include "spmd/generator.hpp"
#include "spmd/mixing.hpp"
#include "spmd/schedules.hpp"
#include "spmd/spmd.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace spmd {

/// Flat `key=value` text; `#` starts a comment, blank lines are skipped.
using KeyValues = std::map<std::string, std::string>;
KeyValues parse_key_values(std::istream& in);
KeyValues load_key_values(const std::string& path);

/**
 * Experiment settings. Keys:
 *   mdp.file, gen.states, gen.actions, gen.branching, gen.cost_seed,
 *   gen.kernel_seed, gen.mix, gen.gamma, divergence, evaluator, k, delta,
 *   eps_target, seed, replications, out_dir, n_cap, m_cap, sweep.k,
 * and the optional overrides eta, n, m, tau.
 */
struct ExperimentConfig {
  std::optional<std::string> mdp_file;
  GeneratorSpec generator;
  DivergenceKind divergence = DivergenceKind::kl();
  /// exact | vbe1 | vbe2 | tomc_multi | tomc_single
  std::string evaluator = "exact";
  int k = 100;
  double delta = 0.1;
  double eps_target = 0.2;
  std::uint64_t seed = 0;
  int replications = 1;
  std::string out_dir = "out";
  /// Caps applied to scheduled trajectory length and count.
  std::uint64_t n_cap = 1000;
  std::uint64_t m_cap = 100;
  std::optional<double> eta;
  std::optional<int> n;
  std::optional<int> m;
  std::optional<double> tau;
  std::vector<int> sweep_k;

  static const std::vector<std::string>& keys();
  /// Applies every recognised key; throws std::invalid_argument on unknown keys or bad values.
  void apply(const KeyValues& values);
  void validate() const;
};

/// Schedule plus the run settings it resolves to for one k.
struct Plan {
  Schedule schedule;
  MixingProfile profile;
  SpmdConfig spmd;
};

Mdp load_or_generate(const ExperimentConfig& config);

/// Resolves the named preset for `k` and applies caps and overrides.
Plan make_plan(const Mdp& mdp, const ExperimentConfig& config, int k);

struct KSummary {
  int k = 0;
  int replications = 0;
  int failed = 0;
  double mean_best_gap = 0.0;
  double q10_best_gap = 0.0;
  double q50_best_gap = 0.0;
  double q90_best_gap = 0.0;
  double mean_uniform_gap = 0.0;
  double envelope_coverage = 0.0;
  double floor_coverage = 0.0;
  long three_point_violations = 0;
  std::uint64_t samples_per_run = 0;
};

struct ExperimentSummary {
  std::vector<KSummary> rows;
  /// Least-squares slope of log(mean best gap) against log k; NaN unless sweeping.
  double sweep_slope = 0.0;
  int failures = 0;
};

/// Linear-interpolated quantile of unsorted values.
double quantile(std::vector<double> values, double q);

/// Least-squares slope of log y against log x over entries with x, y > 0.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

/**
 * Runs every replication (for each k of the sweep, or config.k) and writes
 * run_<r>.csv, summary.csv and manifest.txt under out_dir (one k_<k>
 * subdirectory per sweep point). Failed replications are listed in the
 * manifest and counted in the summary; the remaining outputs are kept.
 */
ExperimentSummary run_experiment(const ExperimentConfig& config, std::ostream& log);

}  // namespace spmd
