#pragma once

#include "spmd/mdp.hpp"

#include <random>

namespace fixtures {

/// One state, two actions with costs (0, 1), self-loop, gamma = 1/2.
inline spmd::Mdp m1(double gamma = 0.5) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Ones(2, 1);
  Eigen::MatrixXd c(1, 2);
  c << 0.0, 1.0;
  return spmd::Mdp(1, 2, p, c, gamma);
}

/// Deterministic two-cycle s0 -> s1 -> s0, one action, costs (0, 1), gamma = 1/2.
inline spmd::Mdp m2() {
  Eigen::MatrixXd p(2, 2);
  p << 0.0, 1.0,
       1.0, 0.0;
  Eigen::MatrixXd c(2, 1);
  c << 0.0, 1.0;
  return spmd::Mdp(2, 1, p, c, 0.5);
}

/// Two states, two actions, every transition uniform.
inline spmd::Mdp m3() {
  Eigen::MatrixXd p = Eigen::MatrixXd::Constant(4, 2, 0.5);
  Eigen::MatrixXd c(2, 2);
  c << 0.2, 0.7,
       0.4, 0.1;
  return spmd::Mdp(2, 2, p, c, 0.5);
}

/// Dense random MDP with strictly positive transitions.
inline spmd::Mdp random_mdp(std::mt19937_64& rng, int ns, int na, double gamma) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd p(ns * na, ns);
  for (int r = 0; r < ns * na; ++r) {
    for (int s = 0; s < ns; ++s) p(r, s) = u(rng) + 1e-3;
    p.row(r) /= p.row(r).sum();
  }
  Eigen::MatrixXd c(ns, na);
  for (int s = 0; s < ns; ++s)
    for (int a = 0; a < na; ++a) c(s, a) = u(rng);
  return spmd::Mdp(ns, na, p, c, gamma);
}

/// Random simplex point (flat Dirichlet), optionally bounded away from zero.
inline Eigen::VectorXd random_simplex(std::mt19937_64& rng, int n, double floor = 0.0) {
  std::exponential_distribution<double> e(1.0);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = e(rng) + floor;
  return x / x.sum();
}

inline spmd::Policy random_policy(std::mt19937_64& rng, int ns, int na, double floor = 0.0) {
  Eigen::MatrixXd rows(ns, na);
  for (int s = 0; s < ns; ++s) rows.row(s) = random_simplex(rng, na, floor).transpose();
  return spmd::Policy(rows);
}

}  // namespace fixtures
