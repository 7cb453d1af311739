#pragma once

#include "spmd/mdp.hpp"

namespace spmd {

/**
 * Geometric-mixing certificate for the state chain of one policy:
 *
 *     sum_s |P(S_t = s | S_0 = s0) - nu(s)| <= C rho^(t+1)
 *
 * for every start s0 and every t in [0, horizon]. The constants are fitted
 * from the exact total-variation curve, so they certify only the checked
 * horizon.
 */
struct MixingProfile {
  double c = 1.0;
  double rho = 0.5;
  double nu_min = 1.0;
  StateDist nu;
  int horizon = 0;

  /// ceil(log_rho(x / (2C))), clamped below at 1.
  int t_mix(double x) const;
};

/// Worst-case (over starts) L1 distance to nu for t = 0..horizon.
Eigen::VectorXd tv_curve(const Eigen::MatrixXd& kernel, const StateDist& nu, int horizon);

/// Smallest rho the fit will return.
inline constexpr double kRhoFloor = 1e-6;

/**
 * Fits (C, rho) to the TV curve of `policy`. Among all certifying pairs
 * (C = max(1, max_t tv_t / rho^(t+1))) the one minimising t_mix(nu_min) is
 * returned; ties go to the smaller rho. `horizon <= 0` selects 10 |S|^2.
 *
 * Throws NumericError for reducible or periodic chains, and when the curve
 * has not decayed below 1e-6 by the horizon.
 */
MixingProfile mixing_constants(const Mdp& mdp, const Policy& policy, int horizon = 0);

}  // namespace spmd
