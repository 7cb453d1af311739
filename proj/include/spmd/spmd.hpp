#pragma once

#include "spmd/divergences.hpp"
#include "spmd/evaluators.hpp"
#include "spmd/mdp.hpp"

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

namespace spmd {

/// Tally of three-point checks over executed updates.
struct StepCertificate {
  int checks = 0;
  int violations = 0;
  double max_slack = -std::numeric_limits<double>::infinity();
};

inline constexpr double kThreePointTolerance = 1e-9;

/**
 * pi_{t+1}(.|s) = argmin_x eta <q(s, .), x> + D(x, pi_t(.|s)) for every s.
 * When `comparators` is non-empty, each state's update is certified against
 * every comparator row (rows are per-state distributions, one matrix per
 * comparator) and the result is accumulated into `certificate`.
 */
Policy spmd_step(const Policy& policy, const QTable& q_est, double eta, const DivergenceKind& kind, double eps_inner,
                 int min_bisection_steps = 0, const std::vector<Eigen::MatrixXd>& comparators = {},
                 StepCertificate* certificate = nullptr);

struct SpmdConfig {
  DivergenceKind divergence = DivergenceKind::kl();
  EvalSpec evaluator;
  int k = 1;
  double eta = 0.0;
  double delta = 0.1;
  std::uint64_t seed = 0;
  std::uint64_t replication = 0;
  /// Start distribution of the objective; empty means uniform.
  StateDist vartheta;
  double eps_inner = 1e-10;
  /// Lower bound on Tsallis bisection steps inside the loop.
  int min_bisection_steps = 64;
  /// Noise envelope Z (0 disables the check).
  double z_envelope = 0.0;
  /// Exploration floor to audit (0 disables the check).
  double exploration_floor = 0.0;
  /// Stationary lower bound the schedule assumed (0 disables drift flags).
  double nu_floor = 0.0;
  /// Re-fit the mixing constants on pi_0 and every ceil(k/10)-th iterate.
  bool mixing_diagnostics = true;
  /// Start policy; empty means uniform.
  std::optional<Policy> initial_policy;
};

struct IterationRow {
  int iter = 0;
  double f_pi = 0.0;
  double best_gap = 0.0;
  std::uint64_t samples_cum = 0;
  double min_opt_prob = 0.0;
  /// max_s Y_{iter+1, s}.
  double noise_max = 0.0;
  double eta = 0.0;
};

struct MixingCheck {
  int iter = 0;
  double c = 1.0;
  double rho = 0.0;
  double nu_min = 0.0;
  /// nu_min fell below the configured floor.
  bool drifted = false;
};

struct RunRecord {
  std::vector<IterationRow> rows;
  /// Row t holds Y_{t+1, .} = sum_{i <= t} X_{i, .}.
  Eigen::MatrixXd noise;
  /// Row t holds X_{t, .}.
  Eigen::MatrixXd increments;
  /// max_s D(pi*(.|s), pi_t(.|s)) for t = 0..k.
  std::vector<double> opt_divergence;
  Policy final_policy = Policy::uniform(1, 1);
  Policy best_policy = Policy::uniform(1, 1);
  std::vector<int> optimal_actions;
  double f_star = 0.0;
  /// Mean over t of f(pi_t) - f*: the expectation of the uniformly drawn iterate.
  double uniform_iterate_gap = 0.0;
  StepCertificate three_point;
  /// max_s Y_{t,s} <= Z sqrt(t) for every t (true when unchecked).
  bool envelope_held = true;
  /// min_s pi_t(a*_s|s) >= floor for every t (true when unchecked).
  bool floor_held = true;
  std::vector<MixingCheck> mixing;
  double nu_running_min = 1.0;

  double final_best_gap() const { return rows.empty() ? 0.0 : rows.back().best_gap; }
};

/**
 * Runs k iterations of stochastic policy mirror descent. Each iteration
 * draws fresh trajectories (streams (seed, replication, index), index
 * counting trajectories in order), builds the estimate, records exact
 * telemetry and takes one proximal step. Throws NumericError naming the
 * iteration when an update or a mixing diagnostic fails.
 */
RunRecord run(const Mdp& mdp, const SpmdConfig& config);

/// Samples consumed by one evaluation with `spec`.
std::uint64_t samples_per_iteration(const EvalSpec& spec);

/// CSV `iter,f_pi,best_gap,samples_cum,min_opt_prob,noise_max,eta`.
void write_run_csv(std::ostream& out, const RunRecord& record);

}  // namespace spmd
