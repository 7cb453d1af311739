#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace spmd {

using VTable = Eigen::VectorXd;
/// Rows are states, columns are actions.
using QTable = Eigen::MatrixXd;
/// Probability vector over states.
using StateDist = Eigen::VectorXd;

/// Raised when a numerical routine cannot produce a trustworthy result
/// (singular solve, non-convergence, violated chain property, ...).
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct StateAction {
  int state = 0;
  int action = 0;
  friend bool operator==(const StateAction&, const StateAction&) = default;
};

/**
 * Finite discounted MDP with costs in [0, 1].
 *
 * The transition kernel is stored as a (|S|*|A|) x |S| matrix whose row
 * `s * |A| + a` holds P[. | s, a].
 */
class Mdp {
public:
  Mdp(int n_states, int n_actions, Eigen::MatrixXd transition, Eigen::MatrixXd cost, double gamma);

  int n_states() const { return n_states_; }
  int n_actions() const { return n_actions_; }
  double gamma() const { return gamma_; }

  const Eigen::MatrixXd& transition() const { return transition_; }
  /// |S| x |A| cost table.
  const Eigen::MatrixXd& cost() const { return cost_; }

  double cost(int s, int a) const { return cost_(s, a); }
  double prob(int s, int a, int next) const { return transition_(row(s, a), next); }
  auto next_state_row(int s, int a) const { return transition_.row(row(s, a)); }

  int row(int s, int a) const { return s * n_actions_ + a; }

  /// Text format: header `mdp |S| |A| gamma`, then one line per (s, a):
  /// `s a c(s,a) P[0|s,a] ... P[|S|-1|s,a]`.
  static Mdp read(std::istream& in);
  static Mdp load(const std::string& path);
  void write(std::ostream& out) const;
  void save(const std::string& path) const;

  static constexpr double kRowSumTolerance = 1e-9;

private:
  int n_states_;
  int n_actions_;
  Eigen::MatrixXd transition_;
  Eigen::MatrixXd cost_;
  double gamma_;
};

/// Stationary randomized policy: one probability row per state.
class Policy {
public:
  explicit Policy(Eigen::MatrixXd rows);

  static Policy uniform(int n_states, int n_actions);
  /// Deterministic policy from one action index per state.
  static Policy deterministic(const std::vector<int>& actions, int n_actions);

  int n_states() const { return static_cast<int>(rows_.rows()); }
  int n_actions() const { return static_cast<int>(rows_.cols()); }

  double operator()(int s, int a) const { return rows_(s, a); }
  auto row(int s) const { return rows_.row(s); }
  const Eigen::MatrixXd& matrix() const { return rows_; }

  /// True when every entry is strictly positive.
  bool interior() const;
  bool interior_at(int s) const;

  void set_row(int s, const Eigen::VectorXd& row);

  static constexpr double kRowSumTolerance = 1e-12;

private:
  Eigen::MatrixXd rows_;
};

void check_compatible(const Mdp& mdp, const Policy& policy);
void check_distribution(const Eigen::VectorXd& dist, const char* what, double tol = 1e-9);

/// P_pi[s, s'] = sum_a pi(a|s) P[s'|s, a].
Eigen::MatrixXd induced_kernel(const Mdp& mdp, const Policy& policy);
/// c_pi(s) = sum_a pi(a|s) c(s, a).
Eigen::VectorXd induced_cost(const Mdp& mdp, const Policy& policy);

/// CSV `s,a,value`.
void write_qtable_csv(std::ostream& out, const QTable& q);

}  // namespace spmd
