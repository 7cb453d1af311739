#pragma once

#include <Eigen/Dense>

#include <string>

namespace spmd {

/// KL, or Tsallis with entropic index p in (0, 1).
class DivergenceKind {
public:
  enum class Family { Kl, Tsallis };

  static DivergenceKind kl() { return DivergenceKind(Family::Kl, 0.0); }
  static DivergenceKind tsallis(double p);
  /// Accepts `kl` or `tsallis:<p>`.
  static DivergenceKind parse(const std::string& text);

  Family family() const { return family_; }
  bool is_kl() const { return family_ == Family::Kl; }
  /// Tsallis index; 0 for KL.
  double p() const { return p_; }

  std::string to_string() const;

  friend bool operator==(const DivergenceKind&, const DivergenceKind&) = default;

private:
  DivergenceKind(Family family, double p) : family_(family), p_(p) {}

  Family family_;
  double p_;
};

/// D(x, y) = w(x) - w(y) - <grad w(y), x - y>. `y` must be strictly positive.
double bregman(const DivergenceKind& kind, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// argmin_x eta <q, x> + KL(x || pi), i.e. pi * exp(-eta q) renormalised.
Eigen::VectorXd kl_update(const Eigen::VectorXd& pi, const Eigen::VectorXd& q, double eta);

/// ceil(log2(2 |A|^2 / ((1 - p) eps))).
int tsallis_bisection_steps(int n_actions, double p, double eps);

/**
 * Tsallis proximal step by bisection on the multiplier of the simplex
 * constraint. Runs max(tsallis_bisection_steps(...), min_steps) halvings
 * and returns the normalised row at the final midpoint.
 */
Eigen::VectorXd tsallis_update(const Eigen::VectorXd& pi, const Eigen::VectorXd& q, double eta, double p, double eps,
                               int min_steps = 0);

/// Exact Tsallis proximal step (bisection run until the bracket stops shrinking).
Eigen::VectorXd tsallis_update_exact(const Eigen::VectorXd& pi, const Eigen::VectorXd& q, double eta, double p);

/// Dispatches on the divergence family.
Eigen::VectorXd prox_update(const DivergenceKind& kind, const Eigen::VectorXd& pi, const Eigen::VectorXd& q,
                            double eta, double eps_inner, int min_steps = 0);

/// mu with D(x, y) >= (mu / 2) ||x - y||_1^2: 1 for KL, p(1 - p)/|A| for Tsallis.
double strong_convexity_modulus(const DivergenceKind& kind, int n_actions);

/**
 * Largest floor implied by (1 - gamma) D(e_a, pi) <= d_cap for a vertex e_a:
 * exp(-d_cap / (1 - gamma)) for KL, ((d_cap / (1 - gamma) + 1) / p)^(1/(p-1))
 * for Tsallis.
 */
double divergence_floor(const DivergenceKind& kind, double d_cap, double gamma, int n_actions);

/**
 * Closed-form floor used by the stepsize propositions when d_cap equals
 * `multiplier` times the divergence from the uniform policy:
 * |A|^(-multiplier / (1 - gamma)) for KL and
 * (multiplier / ((1 - gamma) p))^(1/(p-1)) / |A| for Tsallis.
 * Never exceeds divergence_floor at the same d_cap.
 */
double proposition_floor(const DivergenceKind& kind, double multiplier, double gamma, int n_actions);

/// max over vertices e_a of D(e_a, uniform): ln|A| for KL, |A|^(1-p) - 1 for Tsallis.
double uniform_vertex_divergence(const DivergenceKind& kind, int n_actions);

/**
 * eta <q, x_new - p> + D(x_new, x_old) - D(p, x_old) + D(p, x_new).
 * Non-positive (up to rounding) whenever x_new is the proximal step from x_old.
 */
double three_point_slack(const DivergenceKind& kind, const Eigen::VectorXd& q, double eta, const Eigen::VectorXd& x_old,
                         const Eigen::VectorXd& x_new, const Eigen::VectorXd& comparator);

}  // namespace spmd
