#pragma once

#include "spmd/mdp.hpp"
#include "spmd/mixing.hpp"
#include "spmd/trajectory.hpp"

#include <span>
#include <string>

namespace spmd {

enum class EvalKind { OmcQ, OmcV, Vbe1, Vbe2, Tomc, Exact };

std::string to_string(EvalKind kind);

/// Parameters of one evaluation call: trajectory length n, count m, truncation tau.
struct EvalSpec {
  EvalKind kind = EvalKind::Exact;
  int n = 1;
  int m = 1;
  double tau = 1.0;

  void validate() const;
};

/// Smallest policy value the importance-weighted estimators will divide by.
inline constexpr double kMinImportanceWeight = 1e-300;

// On-policy Monte Carlo: discounted cost from the first visit of z (or s).
double omc_q_single(const Trajectory& traj, const StateAction& z, int n, double gamma);
QTable omc_q_single_table(const Trajectory& traj, int n_states, int n_actions, int n, double gamma);
QTable omc_q_batch(std::span<const Trajectory> trajs, int n_states, int n_actions, int n, double gamma);
VTable omc_v(std::span<const Trajectory> trajs, int n_states, int n, double gamma);

/**
 * Value-based estimate, two-trajectory variant. The value of S_{tau(s)+1} is
 * read from an OMC(n, 1) estimate on `xi_v`; `xi_q` must carry S_n.
 * Throws std::invalid_argument when both trajectories share a stream.
 */
QTable vbe1(const Trajectory& xi_v, const Trajectory& xi_q, const Policy& policy, int n, double gamma);

/// Same backup with a caller-supplied value table.
QTable vbe1_with_value(const VTable& v_hat, const Trajectory& xi_q, const Policy& policy, int n, double gamma);

/// Value-based estimate, single-trajectory variant.
QTable vbe2(const Trajectory& xi, const Policy& policy, int n, double gamma);

/// OMC(n, m) with entries below the policy threshold replaced by 1 / (1 - gamma).
QTable tomc(std::span<const Trajectory> trajs, const Policy& policy, int n, double tau, double gamma);

/// 2(n+1)/(1-gamma) [gamma^(n-1) + (1 - x/(2 t_mix))^(n-1)].
double hitting_bias_term(int n, double gamma, double hit_prob, int t_mix);

/**
 * Right-hand side of the bias bound for `kind`. `hit_prob` is sigma(z) for
 * OMC_Q/TOMC, nu(s) for OMC_V, and the uniform lower bound on nu for the
 * value-based kinds. Throws when hit_prob <= 0.
 */
double theoretical_bias_bound(EvalKind kind, int n, double gamma, const MixingProfile& profile, double hit_prob);

/// delta = exact - estimate, plus the pairing increments
/// X_s = E_{s' ~ d_s}<delta(s', .), pi(.|s') - pi*(.|s')>.
struct NoiseRecord {
  QTable delta;
  Eigen::VectorXd pairing;  // <delta(s, .), pi(.|s) - pi*(.|s)> per state
  Eigen::VectorXd increments;
};

NoiseRecord noise_record(const QTable& exact, const QTable& estimate, const Policy& policy, const Policy& pi_star,
                         const Eigen::MatrixXd& d_weights);

/// Realised second moment sum_a pi(a|s) Q(s, a)^2 for one state.
double weighted_second_moment(const QTable& estimate, const Policy& policy, int s);

}  // namespace spmd
