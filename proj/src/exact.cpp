#include "spmd/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>

namespace spmd {

namespace {

Eigen::VectorXd solve_checked(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const char* what) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  Eigen::VectorXd x = lu.solve(b);
  // One step of iterative refinement keeps residuals at the 1e-15 level for
  // the ill-conditioned gamma -> 1 systems.
  x += lu.solve(b - a * x);
  if (!x.allFinite() || (a * x - b).lpNorm<Eigen::Infinity>() > 1e-10 * std::max(1.0, b.lpNorm<Eigen::Infinity>()))
    throw NumericError(std::string(what) + ": linear system is singular or badly conditioned");
  return x;
}

std::vector<int> bfs_levels(const Eigen::MatrixXd& adjacency_weights, bool reverse) {
  const auto n = static_cast<int>(adjacency_weights.rows());
  std::vector<int> level(static_cast<std::size_t>(n), -1);
  std::queue<int> frontier;
  level[0] = 0;
  frontier.push(0);
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int v = 0; v < n; ++v) {
      const double w = reverse ? adjacency_weights(v, u) : adjacency_weights(u, v);
      if (w > 0.0 && level[static_cast<std::size_t>(v)] < 0) {
        level[static_cast<std::size_t>(v)] = level[static_cast<std::size_t>(u)] + 1;
        frontier.push(v);
      }
    }
  }
  return level;
}

}  // namespace

VTable exact_value(const Mdp& mdp, const Policy& policy) {
  const Eigen::MatrixXd kernel = induced_kernel(mdp, policy);
  const Eigen::VectorXd c = induced_cost(mdp, policy);
  const auto n = kernel.rows();
  const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) - mdp.gamma() * kernel;
  return solve_checked(system, c, "exact_value");
}

QTable q_backup(const Mdp& mdp, const VTable& v) {
  const Eigen::VectorXd next = mdp.transition() * v;
  QTable q(mdp.n_states(), mdp.n_actions());
  for (int s = 0; s < mdp.n_states(); ++s)
    for (int a = 0; a < mdp.n_actions(); ++a) q(s, a) = mdp.cost(s, a) + mdp.gamma() * next(mdp.row(s, a));
  return q;
}

QTable exact_q(const Mdp& mdp, const Policy& policy) { return q_backup(mdp, exact_value(mdp, policy)); }

double bellman_residual(const Mdp& mdp, const Policy& policy, const VTable& v) {
  const Eigen::VectorXd rhs = induced_cost(mdp, policy) + mdp.gamma() * induced_kernel(mdp, policy) * v;
  return (v - rhs).lpNorm<Eigen::Infinity>();
}

OptimalValues optimal_values(const Mdp& mdp, double tol, int max_sweeps) {
  if (!(tol > 0.0)) throw std::invalid_argument("optimal_values: tol must be positive");
  const double gamma = mdp.gamma();
  VTable v = VTable::Zero(mdp.n_states());
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    VTable next = q_backup(mdp, v).rowwise().minCoeff();
    const double change = (next - v).lpNorm<Eigen::Infinity>();
    v = std::move(next);
    if (gamma / (1.0 - gamma) * change <= tol) return {v, q_backup(mdp, v), sweep};
  }
  std::ostringstream msg;
  msg << "value iteration did not reach tol " << tol << " within " << max_sweeps << " sweeps";
  throw NumericError(msg.str());
}

std::vector<std::vector<int>> optimal_action_sets(const QTable& q_star, double tie_tol) {
  std::vector<std::vector<int>> sets(static_cast<std::size_t>(q_star.rows()));
  for (Eigen::Index s = 0; s < q_star.rows(); ++s) {
    const double best = q_star.row(s).minCoeff();
    for (Eigen::Index a = 0; a < q_star.cols(); ++a)
      if (q_star(s, a) <= best + tie_tol) sets[static_cast<std::size_t>(s)].push_back(static_cast<int>(a));
  }
  return sets;
}

Policy greedy_policy(const QTable& q_star, double tie_tol) {
  const auto sets = optimal_action_sets(q_star, tie_tol);
  std::vector<int> actions;
  actions.reserve(sets.size());
  for (const auto& set : sets) actions.push_back(set.front());
  return Policy::deterministic(actions, static_cast<int>(q_star.cols()));
}

double objective(const Mdp& mdp, const Policy& policy, const StateDist& vartheta) {
  check_distribution(vartheta, "vartheta");
  if (vartheta.size() != mdp.n_states()) throw std::invalid_argument("vartheta has wrong length");
  return vartheta.dot(exact_value(mdp, policy));
}

StateDist visitation_measure(const Mdp& mdp, const Policy& policy, const StateDist& start) {
  check_distribution(start, "start distribution");
  if (start.size() != mdp.n_states()) throw std::invalid_argument("start distribution has wrong length");
  const Eigen::MatrixXd kernel = induced_kernel(mdp, policy);
  const auto n = kernel.rows();
  const Eigen::MatrixXd system = (Eigen::MatrixXd::Identity(n, n) - mdp.gamma() * kernel).transpose();
  return solve_checked(system, (1.0 - mdp.gamma()) * start, "visitation_measure");
}

Eigen::MatrixXd visitation_matrix(const Mdp& mdp, const Policy& policy) {
  const Eigen::MatrixXd kernel = induced_kernel(mdp, policy);
  const auto n = kernel.rows();
  const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) - mdp.gamma() * kernel;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  Eigen::MatrixXd d = (1.0 - mdp.gamma()) * lu.solve(Eigen::MatrixXd::Identity(n, n));
  if (!d.allFinite()) throw NumericError("visitation_matrix: singular system");
  return d;
}

ChainStructure chain_structure(const Eigen::MatrixXd& kernel) {
  ChainStructure out;
  const auto forward = bfs_levels(kernel, false);
  const auto backward = bfs_levels(kernel, true);
  out.irreducible = std::all_of(forward.begin(), forward.end(), [](int l) { return l >= 0; }) &&
                    std::all_of(backward.begin(), backward.end(), [](int l) { return l >= 0; });
  int g = 0;
  const auto n = static_cast<int>(kernel.rows());
  for (int u = 0; u < n; ++u) {
    if (forward[static_cast<std::size_t>(u)] < 0) continue;
    for (int v = 0; v < n; ++v) {
      if (kernel(u, v) > 0.0 && forward[static_cast<std::size_t>(v)] >= 0)
        g = std::gcd(g, std::abs(forward[static_cast<std::size_t>(u)] + 1 - forward[static_cast<std::size_t>(v)]));
    }
  }
  out.period = g;
  return out;
}

StateDist stationary_distribution(const Mdp& mdp, const Policy& policy) {
  const Eigen::MatrixXd kernel = induced_kernel(mdp, policy);
  const auto chain = chain_structure(kernel);
  if (!chain.irreducible) throw NumericError("reducible chain: induced state chain is not irreducible");
  if (chain.period != 1) {
    std::ostringstream msg;
    msg << "periodic chain: induced state chain has period " << chain.period;
    throw NumericError(msg.str());
  }
  const auto n = kernel.rows();
  Eigen::MatrixXd system = (Eigen::MatrixXd::Identity(n, n) - kernel).transpose();
  system.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  StateDist nu = lu.solve(rhs);
  nu += lu.solve(rhs - system * nu);
  nu = nu.cwiseMax(0.0);
  nu /= nu.sum();
  const double residual = (nu.transpose() - nu.transpose() * kernel).lpNorm<1>();
  if (!nu.allFinite() || residual > 1e-10) throw NumericError("stationary_distribution: fixed-point residual too large");
  return nu;
}

QTable stationary_state_action(const StateDist& nu, const Policy& policy) {
  return policy.matrix().array().colwise() * nu.array();
}

}  // namespace spmd
