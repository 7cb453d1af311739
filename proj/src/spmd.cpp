#include "spmd/spmd.hpp"

#include "spmd/exact.hpp"
#include "spmd/mixing.hpp"
#include "spmd/trajectory.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace spmd {

namespace {

/// Comparator streams live above every trajectory index.
constexpr std::uint64_t kComparatorStreamBit = std::uint64_t{1} << 63;

Eigen::MatrixXd random_rows(int n_states, int n_actions, RandomStream& rng) {
  Eigen::MatrixXd rows(n_states, n_actions);
  for (int s = 0; s < n_states; ++s) {
    for (int a = 0; a < n_actions; ++a) rows(s, a) = -std::log1p(-rng.uniform());
    rows.row(s) /= rows.row(s).sum();
  }
  return rows;
}

QTable estimate_q(const Mdp& mdp, const Policy& policy, const EvalSpec& spec, const StreamId& base,
                  std::uint64_t& next_index) {
  const auto stream = [&] { return StreamId{base.seed, base.run, next_index++}; };
  const double gamma = mdp.gamma();
  switch (spec.kind) {
    case EvalKind::Exact:
      return exact_q(mdp, policy);
    case EvalKind::OmcQ:
    case EvalKind::Tomc: {
      std::vector<Trajectory> trajs;
      trajs.reserve(static_cast<std::size_t>(spec.m));
      for (int j = 0; j < spec.m; ++j) trajs.push_back(simulate(mdp, policy, UniformStart{}, spec.n, stream()));
      if (spec.kind == EvalKind::OmcQ)
        return omc_q_batch(trajs, mdp.n_states(), mdp.n_actions(), spec.n, gamma);
      return tomc(trajs, policy, spec.n, spec.tau, gamma);
    }
    case EvalKind::Vbe1: {
      const Trajectory xi_v = simulate(mdp, policy, UniformStart{}, spec.n, stream());
      const Trajectory xi_q = simulate(mdp, policy, UniformStart{}, spec.n, stream(), true);
      return vbe1(xi_v, xi_q, policy, spec.n, gamma);
    }
    case EvalKind::Vbe2: {
      const Trajectory xi = simulate(mdp, policy, UniformStart{}, spec.n, stream(), true);
      return vbe2(xi, policy, spec.n, gamma);
    }
    case EvalKind::OmcV:
      break;
  }
  throw std::invalid_argument("run: evaluator " + to_string(spec.kind) + " does not produce Q estimates");
}

MixingCheck diagnose(const Mdp& mdp, const Policy& policy, int iter, double nu_floor) {
  MixingProfile profile;
  try {
    profile = mixing_constants(mdp, policy);
  } catch (const NumericError& e) {
    std::ostringstream msg;
    msg << "iteration " << iter << ": mixing diagnostic failed: " << e.what();
    throw NumericError(msg.str());
  }
  MixingCheck check;
  check.iter = iter;
  check.c = profile.c;
  check.rho = profile.rho;
  check.nu_min = profile.nu_min;
  check.drifted = nu_floor > 0.0 && profile.nu_min < nu_floor;
  return check;
}

}  // namespace

Policy spmd_step(const Policy& policy, const QTable& q_est, double eta, const DivergenceKind& kind, double eps_inner,
                 int min_bisection_steps, const std::vector<Eigen::MatrixXd>& comparators,
                 StepCertificate* certificate) {
  if (q_est.rows() != policy.n_states() || q_est.cols() != policy.n_actions())
    throw std::invalid_argument("spmd_step: estimate shape does not match the policy");
  if (!(eta >= 0.0)) throw std::invalid_argument("spmd_step: eta must be non-negative");
  Eigen::MatrixXd next(policy.n_states(), policy.n_actions());
  for (int s = 0; s < policy.n_states(); ++s) {
    const Eigen::VectorXd old_row = policy.row(s).transpose();
    const Eigen::VectorXd q_row = q_est.row(s).transpose();
    const Eigen::VectorXd new_row = prox_update(kind, old_row, q_row, eta, eps_inner, min_bisection_steps);
    next.row(s) = new_row.transpose();
    if (certificate == nullptr) continue;
    for (const auto& comparator : comparators) {
      const Eigen::VectorXd p_row = comparator.row(s).transpose();
      const double slack = three_point_slack(kind, q_row, eta, old_row, new_row, p_row);
      ++certificate->checks;
      certificate->max_slack = std::max(certificate->max_slack, slack);
      if (slack > kThreePointTolerance) ++certificate->violations;
    }
  }
  return Policy(std::move(next));
}

std::uint64_t samples_per_iteration(const EvalSpec& spec) {
  const auto n = static_cast<std::uint64_t>(spec.n);
  switch (spec.kind) {
    case EvalKind::Exact: return 0;
    case EvalKind::OmcQ:
    case EvalKind::OmcV:
    case EvalKind::Tomc: return static_cast<std::uint64_t>(spec.m) * n;
    case EvalKind::Vbe1: return n + (n + 1);
    case EvalKind::Vbe2: return n + 1;
  }
  return 0;
}

RunRecord run(const Mdp& mdp, const SpmdConfig& config) {
  if (config.k < 1) throw std::invalid_argument("run: k must be at least 1");
  if (!(config.eta >= 0.0)) throw std::invalid_argument("run: eta must be non-negative");
  config.evaluator.validate();
  const int ns = mdp.n_states();
  const int na = mdp.n_actions();

  StateDist vartheta = config.vartheta.size() == 0 ? StateDist::Constant(ns, 1.0 / ns) : config.vartheta;
  if (vartheta.size() != ns) throw std::invalid_argument("run: vartheta has the wrong size");
  check_distribution(vartheta, "vartheta");

  Policy policy = config.initial_policy.value_or(Policy::uniform(ns, na));
  check_compatible(mdp, policy);
  if (!policy.interior()) throw std::invalid_argument("run: the starting policy must be interior");

  const OptimalValues opt = optimal_values(mdp, 1e-12);
  const Policy pi_star = greedy_policy(opt.q);
  RunRecord record;
  record.f_star = objective(mdp, pi_star, vartheta);
  record.optimal_actions.resize(static_cast<std::size_t>(ns));
  for (int s = 0; s < ns; ++s) pi_star.row(s).maxCoeff(&record.optimal_actions[static_cast<std::size_t>(s)]);
  const Eigen::MatrixXd d_star = visitation_matrix(mdp, pi_star);

  const int diag_every = (config.k + 9) / 10;
  if (config.mixing_diagnostics) {
    record.mixing.push_back(diagnose(mdp, policy, 0, config.nu_floor));
    record.nu_running_min = record.mixing.back().nu_min;
  }

  const auto min_opt_prob = [&](const Policy& p) {
    double low = 1.0;
    for (int s = 0; s < ns; ++s) low = std::min(low, p(s, record.optimal_actions[static_cast<std::size_t>(s)]));
    return low;
  };
  const auto opt_divergence = [&](const Policy& p) {
    double high = 0.0;
    for (int s = 0; s < ns; ++s)
      high = std::max(high, bregman(config.divergence, pi_star.row(s).transpose(), p.row(s).transpose()));
    return high;
  };

  record.rows.reserve(static_cast<std::size_t>(config.k));
  record.noise = Eigen::MatrixXd::Zero(config.k, ns);
  record.increments = Eigen::MatrixXd::Zero(config.k, ns);
  record.opt_divergence.push_back(opt_divergence(policy));

  const StreamId base{config.seed, config.replication, 0};
  std::uint64_t next_index = 0;
  const std::uint64_t per_iter = samples_per_iteration(config.evaluator);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(ns);
  double best_f = std::numeric_limits<double>::infinity();
  double gap_sum = 0.0;

  for (int t = 0; t < config.k; ++t) {
    const QTable q_exact = exact_q(mdp, policy);
    const double f_pi = objective(mdp, policy, vartheta);
    if (f_pi < best_f) {
      best_f = f_pi;
      record.best_policy = policy;
    }

    const QTable q_est = estimate_q(mdp, policy, config.evaluator, base, next_index);
    const NoiseRecord noise = noise_record(q_exact, q_est, policy, pi_star, d_star);
    y += noise.increments;
    record.increments.row(t) = noise.increments.transpose();
    record.noise.row(t) = y.transpose();

    IterationRow row;
    row.iter = t;
    row.f_pi = f_pi;
    row.best_gap = best_f - record.f_star;
    row.samples_cum = per_iter * static_cast<std::uint64_t>(t + 1);
    row.min_opt_prob = min_opt_prob(policy);
    row.noise_max = y.maxCoeff();
    row.eta = config.eta;
    record.rows.push_back(row);
    gap_sum += f_pi - record.f_star;

    if (config.z_envelope > 0.0 && row.noise_max > config.z_envelope * std::sqrt(static_cast<double>(t + 1)))
      record.envelope_held = false;
    if (config.exploration_floor > 0.0 && row.min_opt_prob < config.exploration_floor) record.floor_held = false;

    RandomStream comparator_rng(StreamId{config.seed, config.replication, kComparatorStreamBit | static_cast<std::uint64_t>(t)});
    const std::vector<Eigen::MatrixXd> comparators{pi_star.matrix(), random_rows(ns, na, comparator_rng)};
    try {
      policy = spmd_step(policy, q_est, config.eta, config.divergence, config.eps_inner, config.min_bisection_steps,
                         comparators, &record.three_point);
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "iteration " << t << ": policy update failed: " << e.what();
      throw NumericError(msg.str());
    }
    record.opt_divergence.push_back(opt_divergence(policy));

    if (config.mixing_diagnostics && (t + 1) % diag_every == 0 && t + 1 < config.k) {
      record.mixing.push_back(diagnose(mdp, policy, t + 1, config.nu_floor));
      record.nu_running_min = std::min(record.nu_running_min, record.mixing.back().nu_min);
    }
  }
  record.final_policy = policy;
  record.uniform_iterate_gap = gap_sum / config.k;
  return record;
}

void write_run_csv(std::ostream& out, const RunRecord& record) {
  out << "iter,f_pi,best_gap,samples_cum,min_opt_prob,noise_max,eta\n" << std::setprecision(17);
  for (const auto& row : record.rows)
    out << row.iter << ',' << row.f_pi << ',' << row.best_gap << ',' << row.samples_cum << ',' << row.min_opt_prob << ','
        << row.noise_max << ',' << row.eta << '\n';
}

}  // namespace spmd
