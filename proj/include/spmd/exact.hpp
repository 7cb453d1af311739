#pragma once

#include "spmd/mdp.hpp"

#include <utility>
#include <vector>

namespace spmd {

/// V^pi from the linear system V = c_pi + gamma P_pi V.
VTable exact_value(const Mdp& mdp, const Policy& policy);

/// Q^pi(s, a) = c(s, a) + gamma sum_s' P[s'|s, a] V^pi(s').
QTable exact_q(const Mdp& mdp, const Policy& policy);

/// One Bellman backup of a value table.
QTable q_backup(const Mdp& mdp, const VTable& v);

/// Sup-norm residual of V against c_pi + gamma P_pi V.
double bellman_residual(const Mdp& mdp, const Policy& policy, const VTable& v);

struct OptimalValues {
  VTable v;
  QTable q;
  int sweeps = 0;
};

/**
 * Value iteration stopped once gamma^k-contraction guarantees
 * ||V - V*||_inf <= tol, followed by one backup for Q*.
 * Throws NumericError if `max_sweeps` is not enough.
 */
OptimalValues optimal_values(const Mdp& mdp, double tol, int max_sweeps = 1'000'000);

/// A*_s = { a : Q*(s, a) <= min_a Q*(s, a) + tie_tol }.
std::vector<std::vector<int>> optimal_action_sets(const QTable& q_star, double tie_tol = 1e-8);

/// Deterministic greedy policy over Q*, ties broken towards the lowest action index.
Policy greedy_policy(const QTable& q_star, double tie_tol = 1e-8);

/// f(pi) = sum_s vartheta(s) V^pi(s).
double objective(const Mdp& mdp, const Policy& policy, const StateDist& vartheta);

/// d(s') = (1 - gamma) sum_t gamma^t P(S_t = s' | S_0 ~ start).
StateDist visitation_measure(const Mdp& mdp, const Policy& policy, const StateDist& start);

/// Row s holds d_s^pi (point-mass start at s).
Eigen::MatrixXd visitation_matrix(const Mdp& mdp, const Policy& policy);

/// Graph checks on the support of P_pi.
struct ChainStructure {
  bool irreducible = false;
  int period = 0;
};
ChainStructure chain_structure(const Eigen::MatrixXd& kernel);

/// nu^pi with ||nu - nu P_pi||_1 <= 1e-10. Throws NumericError naming the
/// violated property if the chain is reducible or periodic.
StateDist stationary_distribution(const Mdp& mdp, const Policy& policy);

/// sigma^pi(s, a) = nu^pi(s) pi(a|s).
QTable stationary_state_action(const StateDist& nu, const Policy& policy);

}  // namespace spmd
