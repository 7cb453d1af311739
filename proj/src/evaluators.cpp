#include "spmd/evaluators.hpp"

#include <cmath>
#include <sstream>

namespace spmd {

namespace {

/// G_t = sum_{t' = t}^{n-1} gamma^(t' - t) c_t' for t = 0..n (G_n = 0).
std::vector<double> discounted_tails(const Trajectory& traj, int n, double gamma) {
  std::vector<double> tail(static_cast<std::size_t>(n) + 1, 0.0);
  for (int t = n - 1; t >= 0; --t)
    tail[static_cast<std::size_t>(t)] = traj.steps[static_cast<std::size_t>(t)].cost + gamma * tail[static_cast<std::size_t>(t) + 1];
  return tail;
}

/// First-visit time of every state within the first n steps (n if unvisited).
std::vector<int> first_state_visits(const Trajectory& traj, int n_states, int n) {
  std::vector<int> first(static_cast<std::size_t>(n_states), n);
  for (int t = n - 1; t >= 0; --t) first[static_cast<std::size_t>(traj.steps[static_cast<std::size_t>(t)].state)] = t;
  return first;
}

void require_length(const Trajectory& traj, int n, const char* what) {
  if (n < 1) throw std::invalid_argument(std::string(what) + ": n must be at least 1");
  if (traj.length() < n) throw std::invalid_argument(std::string(what) + ": trajectory shorter than n");
}

double importance_weight(const Policy& policy, int s, int a) {
  const double p = policy(s, a);
  if (!(p >= kMinImportanceWeight)) {
    std::ostringstream msg;
    msg << "VBE needs interior policy values at visited states (pi(" << a << "|" << s << ") = " << p << ")";
    throw std::domain_error(msg.str());
  }
  return 1.0 / p;
}

}  // namespace

std::string to_string(EvalKind kind) {
  switch (kind) {
    case EvalKind::OmcQ: return "omc_q";
    case EvalKind::OmcV: return "omc_v";
    case EvalKind::Vbe1: return "vbe1";
    case EvalKind::Vbe2: return "vbe2";
    case EvalKind::Tomc: return "tomc";
    case EvalKind::Exact: return "exact";
  }
  return "unknown";
}

void EvalSpec::validate() const {
  if (n < 1) throw std::invalid_argument("eval spec: n must be at least 1");
  if ((kind == EvalKind::Vbe1 || kind == EvalKind::Vbe2) && n < 2)
    throw std::invalid_argument("eval spec: value-based estimators need n >= 2");
  if (m < 1) throw std::invalid_argument("eval spec: m must be at least 1");
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("eval spec: tau must lie in (0, 1]");
}

double omc_q_single(const Trajectory& traj, const StateAction& z, int n, double gamma) {
  require_length(traj, n, "omc_q_single");
  const int tau = first_hit_z(traj, z, n);
  if (tau == n) return 0.0;
  double total = 0.0, discount = 1.0;
  for (int t = tau; t < n; ++t) {
    total += discount * traj.steps[static_cast<std::size_t>(t)].cost;
    discount *= gamma;
  }
  return total;
}

QTable omc_q_single_table(const Trajectory& traj, int n_states, int n_actions, int n, double gamma) {
  require_length(traj, n, "omc_q");
  const auto tail = discounted_tails(traj, n, gamma);
  QTable q = QTable::Zero(n_states, n_actions);
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> seen =
      Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n_states, n_actions, false);
  for (int t = 0; t < n; ++t) {
    const Step& step = traj.steps[static_cast<std::size_t>(t)];
    if (seen(step.state, step.action)) continue;
    seen(step.state, step.action) = true;
    q(step.state, step.action) = tail[static_cast<std::size_t>(t)];
  }
  return q;
}

QTable omc_q_batch(std::span<const Trajectory> trajs, int n_states, int n_actions, int n, double gamma) {
  if (trajs.empty()) throw std::invalid_argument("omc_q_batch: need at least one trajectory");
  QTable sum = QTable::Zero(n_states, n_actions);
  for (const auto& traj : trajs) sum += omc_q_single_table(traj, n_states, n_actions, n, gamma);
  return sum / static_cast<double>(trajs.size());
}

VTable omc_v(std::span<const Trajectory> trajs, int n_states, int n, double gamma) {
  if (trajs.empty()) throw std::invalid_argument("omc_v: need at least one trajectory");
  VTable sum = VTable::Zero(n_states);
  for (const auto& traj : trajs) {
    require_length(traj, n, "omc_v");
    const auto tail = discounted_tails(traj, n, gamma);
    const auto first = first_state_visits(traj, n_states, n);
    for (int s = 0; s < n_states; ++s) {
      const int tau = first[static_cast<std::size_t>(s)];
      if (tau < n) sum(s) += tail[static_cast<std::size_t>(tau)];
    }
  }
  return sum / static_cast<double>(trajs.size());
}

QTable vbe1_with_value(const VTable& v_hat, const Trajectory& xi_q, const Policy& policy, int n, double gamma) {
  require_length(xi_q, n, "vbe1");
  if (xi_q.length() == n && !xi_q.terminal_state)
    throw std::invalid_argument("vbe1: the Q trajectory must carry n + 1 states");
  const int ns = policy.n_states();
  QTable q = QTable::Zero(ns, policy.n_actions());
  const auto first = first_state_visits(xi_q, ns, n);
  for (int s = 0; s < ns; ++s) {
    const int tau = first[static_cast<std::size_t>(s)];
    if (tau == n) continue;
    const Step& step = xi_q.steps[static_cast<std::size_t>(tau)];
    const int next = xi_q.state_at(tau + 1);
    q(s, step.action) = importance_weight(policy, s, step.action) * (step.cost + gamma * v_hat(next));
  }
  return q;
}

QTable vbe1(const Trajectory& xi_v, const Trajectory& xi_q, const Policy& policy, int n, double gamma) {
  if (xi_v.stream == xi_q.stream)
    throw std::invalid_argument("vbe1: value and Q trajectories must come from distinct streams");
  const VTable v_hat = omc_v(std::span<const Trajectory>(&xi_v, 1), policy.n_states(), n, gamma);
  return vbe1_with_value(v_hat, xi_q, policy, n, gamma);
}

QTable vbe2(const Trajectory& xi, const Policy& policy, int n, double gamma) {
  require_length(xi, n, "vbe2");
  const int ns = policy.n_states();
  QTable q = QTable::Zero(ns, policy.n_actions());
  const auto tail = discounted_tails(xi, n, gamma);
  const auto first = first_state_visits(xi, ns, n);
  for (int s = 0; s < ns; ++s) {
    const int tau = first[static_cast<std::size_t>(s)];
    if (tau == n) continue;
    const int a = xi.steps[static_cast<std::size_t>(tau)].action;
    q(s, a) = importance_weight(policy, s, a) * tail[static_cast<std::size_t>(tau)];
  }
  return q;
}

QTable tomc(std::span<const Trajectory> trajs, const Policy& policy, int n, double tau, double gamma) {
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("tomc: tau must lie in (0, 1]");
  QTable q = omc_q_batch(trajs, policy.n_states(), policy.n_actions(), n, gamma);
  const double upper = 1.0 / (1.0 - gamma);
  for (int s = 0; s < policy.n_states(); ++s)
    for (int a = 0; a < policy.n_actions(); ++a)
      if (policy(s, a) < tau) q(s, a) = upper;
  return q;
}

double hitting_bias_term(int n, double gamma, double hit_prob, int t_mix) {
  const double exponent = static_cast<double>(n - 1);
  const double miss = std::exp(exponent * std::log1p(-hit_prob / (2.0 * t_mix)));
  return 2.0 * (n + 1) / (1.0 - gamma) * (std::pow(gamma, exponent) + miss);
}

double theoretical_bias_bound(EvalKind kind, int n, double gamma, const MixingProfile& profile, double hit_prob) {
  if (kind == EvalKind::Exact) return 0.0;
  if (!(hit_prob > 0.0)) throw std::invalid_argument("bias bound undefined: stationary probability must be positive");
  if (n < 1) throw std::invalid_argument("bias bound: n must be at least 1");
  const int t_mix = profile.t_mix(hit_prob);
  const double hitting = hitting_bias_term(n, gamma, hit_prob, t_mix);
  if (kind == EvalKind::Vbe1) {
    const double blocks = std::ceil(static_cast<double>(n) / t_mix);
    return hitting + 4.0 * std::pow(1.0 - hit_prob / 2.0, blocks) / (1.0 - gamma);
  }
  return hitting;
}

NoiseRecord noise_record(const QTable& exact, const QTable& estimate, const Policy& policy, const Policy& pi_star,
                         const Eigen::MatrixXd& d_weights) {
  if (exact.rows() != estimate.rows() || exact.cols() != estimate.cols() || exact.rows() != policy.n_states() ||
      exact.cols() != policy.n_actions() || pi_star.n_states() != policy.n_states() ||
      d_weights.rows() != exact.rows() || d_weights.cols() != exact.rows())
    throw std::invalid_argument("noise_record: tables are not conformable");
  NoiseRecord out;
  out.delta = exact - estimate;
  out.pairing = (out.delta.array() * (policy.matrix() - pi_star.matrix()).array()).rowwise().sum();
  out.increments = d_weights * out.pairing;
  return out;
}

double weighted_second_moment(const QTable& estimate, const Policy& policy, int s) {
  return (policy.row(s).array() * estimate.row(s).array().square()).sum();
}

}  // namespace spmd
