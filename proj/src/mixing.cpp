#include "spmd/mixing.hpp"

#include "spmd/exact.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

namespace spmd {

int MixingProfile::t_mix(double x) const {
  if (!(x > 0.0)) throw std::invalid_argument("t_mix: argument must be positive");
  const double t = std::ceil(std::log(x / (2.0 * c)) / std::log(rho));
  if (!(t >= 1.0)) return 1;
  if (t > static_cast<double>(std::numeric_limits<int>::max())) return std::numeric_limits<int>::max();
  return static_cast<int>(t);
}

Eigen::VectorXd tv_curve(const Eigen::MatrixXd& kernel, const StateDist& nu, int horizon) {
  const auto n = kernel.rows();
  Eigen::MatrixXd dist = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd curve(horizon + 1);
  for (int t = 0; t <= horizon; ++t) {
    curve(t) = (dist.rowwise() - nu.transpose()).cwiseAbs().rowwise().sum().maxCoeff();
    dist = dist * kernel;
  }
  return curve;
}

MixingProfile mixing_constants(const Mdp& mdp, const Policy& policy, int horizon) {
  if (horizon <= 0) horizon = 10 * mdp.n_states() * mdp.n_states();
  MixingProfile out;
  out.nu = stationary_distribution(mdp, policy);
  out.nu_min = out.nu.minCoeff();
  out.horizon = horizon;

  const Eigen::VectorXd curve = tv_curve(induced_kernel(mdp, policy), out.nu, horizon);
  if (curve(horizon) > 1e-6) {
    std::ostringstream msg;
    msg << "mixing: TV distance " << curve(horizon) << " at horizon " << horizon
        << " shows no geometric decay (Assumption of uniform mixing violated)";
    throw NumericError(msg.str());
  }

  // Search over u = -log(rho), log-spaced between rho = 1 - 1e-9 and the floor.
  const double u_lo = -std::log1p(-1e-9);
  const double u_hi = -std::log(kRhoFloor);
  const double log_target = std::log(out.nu_min / 2.0);
  constexpr int kGrid = 4000;
  std::vector<std::pair<double, double>> points;  // (t + 1, log tv_t) for tv_t > 0
  for (int t = 0; t <= horizon; ++t)
    if (curve(t) > 0.0) points.emplace_back(t + 1.0, std::log(curve(t)));
  double best_t = std::numeric_limits<double>::infinity();
  double best_u = u_hi, best_log_c = 0.0;
  for (int i = kGrid; i >= 0; --i) {
    const double u = u_lo * std::pow(u_hi / u_lo, static_cast<double>(i) / kGrid);
    double log_c = 0.0;
    for (const auto& [steps, log_tv] : points) log_c = std::max(log_c, log_tv + steps * u);
    // Continuous t_mix(nu_min) = log(nu_min / (2C)) / log(rho).
    const double t_mix = (log_target - log_c) / (-u);
    if (t_mix < best_t) {
      best_t = t_mix;
      best_u = u;
      best_log_c = log_c;
    }
  }
  out.rho = std::exp(-best_u);
  out.c = std::exp(best_log_c);
  return out;
}

}  // namespace spmd
