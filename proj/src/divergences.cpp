#include "spmd/divergences.hpp"

#include "spmd/mdp.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace spmd {

namespace {

void require_interior(const Eigen::VectorXd& y) {
  if (y.size() == 0 || !(y.minCoeff() > 0.0)) throw std::domain_error("divergence requires interior reference");
}

void require_same_size(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const char* what) {
  if (a.size() != b.size()) throw std::invalid_argument(std::string(what) + ": row sizes differ");
}

/// psi_a(mu) = (p / (q_a - mu))^(1/(1-p)); q_a - mu is clamped at 1e-300.
double psi(double q_a, double mu, double p) {
  return std::pow(p / std::max(q_a - mu, 1e-300), 1.0 / (1.0 - p));
}

double phi(const Eigen::VectorXd& q, double mu, double p) {
  double total = 0.0;
  for (Eigen::Index a = 0; a < q.size(); ++a) total += psi(q(a), mu, p);
  return total - 1.0;
}

/// Shared bisection; `steps < 0` runs until the midpoint stops moving.
Eigen::VectorXd tsallis_bisect(const Eigen::VectorXd& pi, const Eigen::VectorXd& q_hat, double eta, double p,
                               int steps) {
  require_same_size(pi, q_hat, "tsallis_update");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("tsallis_update: index p must lie in (0, 1)");
  if (!(eta >= 0.0)) throw std::invalid_argument("tsallis_update: eta must be non-negative");
  require_interior(pi);
  const auto n = pi.size();
  if (n == 1) return Eigen::VectorXd::Ones(1);

  // q_a = eta Q_a + p pi_a^(p-1), shifted by its minimum; the shift moves mu* by the same amount.
  Eigen::VectorXd q(n);
  for (Eigen::Index a = 0; a < n; ++a) q(a) = eta * q_hat(a) + p * std::pow(pi(a), p - 1.0);
  if (!q.allFinite()) throw NumericError("tsallis_update: non-finite shifted costs");
  q.array() -= q.minCoeff();

  double lo = -p * std::pow(static_cast<double>(n), 1.0 - p);
  double hi = -p;
  const double phi_lo = phi(q, lo, p);
  const double phi_hi = phi(q, hi, p);
  constexpr double kBracketSlack = 1e-12;
  if (phi_lo > kBracketSlack || phi_hi < -kBracketSlack) {
    std::ostringstream msg;
    msg << "tsallis_update: bracket violated (phi(l) = " << phi_lo << ", phi(h) = " << phi_hi << ")";
    throw NumericError(msg.str());
  }

  if (steps >= 0) {
    for (int i = 0; i < steps; ++i) {
      const double mid = 0.5 * (lo + hi);
      (phi(q, mid, p) < 0.0 ? lo : hi) = mid;
    }
  } else {
    for (;;) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (phi(q, mid, p) < 0.0 ? lo : hi) = mid;
    }
  }
  const double mu = 0.5 * (lo + hi);
  Eigen::VectorXd out(n);
  for (Eigen::Index a = 0; a < n; ++a) out(a) = psi(q(a), mu, p);
  out /= out.sum();
  if (!(out.minCoeff() > 0.0)) throw NumericError("tsallis_update: update left the simplex interior");
  return out;
}

}  // namespace

DivergenceKind DivergenceKind::tsallis(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("Tsallis index p must lie strictly inside (0, 1)");
  return DivergenceKind(Family::Tsallis, p);
}

DivergenceKind DivergenceKind::parse(const std::string& text) {
  if (text == "kl") return kl();
  const std::string prefix = "tsallis:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string value = text.substr(prefix.size());
    std::size_t used = 0;
    double p = 0.0;
    try {
      p = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) throw std::invalid_argument("divergence: bad Tsallis index in '" + text + "'");
    return tsallis(p);
  }
  throw std::invalid_argument("divergence: expected 'kl' or 'tsallis:<p>', got '" + text + "'");
}

std::string DivergenceKind::to_string() const {
  if (is_kl()) return "kl";
  std::ostringstream out;
  out << "tsallis:" << p_;
  return out.str();
}

double bregman(const DivergenceKind& kind, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  require_same_size(x, y, "bregman");
  require_interior(y);
  double d = 0.0;
  if (kind.is_kl()) {
    for (Eigen::Index a = 0; a < x.size(); ++a)
      if (x(a) > 0.0) d += x(a) * std::log(x(a) / y(a));
    // Rows need not sum to exactly one; keep the generalised form non-negative.
    d += y.sum() - x.sum();
  } else {
    const double p = kind.p();
    for (Eigen::Index a = 0; a < x.size(); ++a) {
      const double y_pm1 = std::pow(y(a), p - 1.0);
      d += -std::pow(x(a), p) + (1.0 - p) * y(a) * y_pm1 + p * x(a) * y_pm1;
    }
  }
  return std::max(d, 0.0);
}

Eigen::VectorXd kl_update(const Eigen::VectorXd& pi, const Eigen::VectorXd& q, double eta) {
  require_same_size(pi, q, "kl_update");
  if (!(eta >= 0.0)) throw std::invalid_argument("kl_update: eta must be non-negative");
  require_interior(pi);
  const Eigen::VectorXd scaled = eta * q;
  if (!scaled.allFinite()) throw NumericError("kl_update: non-finite eta * q");
  const double shift = scaled.minCoeff();
  Eigen::VectorXd out(pi.size());
  for (Eigen::Index a = 0; a < pi.size(); ++a) out(a) = pi(a) * std::exp(shift - scaled(a));
  const double mass = out.sum();
  if (!(mass > 0.0) || !std::isfinite(mass)) throw NumericError("kl_update: unnormalised mass vanished");
  out /= mass;
  if (!(out.minCoeff() > 0.0)) throw NumericError("kl_update: update left the simplex interior (underflow)");
  return out;
}

int tsallis_bisection_steps(int n_actions, double p, double eps) {
  if (n_actions < 1) throw std::invalid_argument("tsallis_bisection_steps: need at least one action");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("tsallis_bisection_steps: eps must lie in (0, 1)");
  const double a = static_cast<double>(n_actions);
  return static_cast<int>(std::ceil(std::log2(2.0 * a * a / ((1.0 - p) * eps))));
}

Eigen::VectorXd tsallis_update(const Eigen::VectorXd& pi, const Eigen::VectorXd& q, double eta, double p, double eps,
                               int min_steps) {
  const int steps = std::max(tsallis_bisection_steps(static_cast<int>(pi.size()), p, eps), min_steps);
  return tsallis_bisect(pi, q, eta, p, steps);
}

Eigen::VectorXd tsallis_update_exact(const Eigen::VectorXd& pi, const Eigen::VectorXd& q, double eta, double p) {
  return tsallis_bisect(pi, q, eta, p, -1);
}

Eigen::VectorXd prox_update(const DivergenceKind& kind, const Eigen::VectorXd& pi, const Eigen::VectorXd& q,
                            double eta, double eps_inner, int min_steps) {
  if (kind.is_kl()) return kl_update(pi, q, eta);
  return tsallis_update(pi, q, eta, kind.p(), eps_inner, min_steps);
}

double strong_convexity_modulus(const DivergenceKind& kind, int n_actions) {
  if (n_actions < 1) throw std::invalid_argument("strong_convexity_modulus: need at least one action");
  if (kind.is_kl()) return 1.0;
  return kind.p() * (1.0 - kind.p()) / n_actions;
}

double divergence_floor(const DivergenceKind& kind, double d_cap, double gamma, int n_actions) {
  if (!(d_cap > 0.0)) throw std::invalid_argument("divergence_floor: d_cap must be positive");
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("divergence_floor: gamma must lie in (0, 1)");
  if (n_actions < 1) throw std::invalid_argument("divergence_floor: need at least one action");
  if (kind.is_kl()) return std::exp(-d_cap / (1.0 - gamma));
  const double p = kind.p();
  return std::pow((d_cap / (1.0 - gamma) + 1.0) / p, 1.0 / (p - 1.0));
}

double proposition_floor(const DivergenceKind& kind, double multiplier, double gamma, int n_actions) {
  if (!(multiplier >= 1.0)) throw std::invalid_argument("proposition_floor: multiplier must be at least 1");
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("proposition_floor: gamma must lie in (0, 1)");
  if (n_actions < 1) throw std::invalid_argument("proposition_floor: need at least one action");
  const double a = static_cast<double>(n_actions);
  if (kind.is_kl()) return std::pow(a, -multiplier / (1.0 - gamma));
  const double p = kind.p();
  return std::pow(multiplier / ((1.0 - gamma) * p), 1.0 / (p - 1.0)) / a;
}

double uniform_vertex_divergence(const DivergenceKind& kind, int n_actions) {
  if (n_actions < 1) throw std::invalid_argument("uniform_vertex_divergence: need at least one action");
  const double a = static_cast<double>(n_actions);
  if (kind.is_kl()) return std::log(a);
  return std::pow(a, 1.0 - kind.p()) - 1.0;
}

double three_point_slack(const DivergenceKind& kind, const Eigen::VectorXd& q, double eta, const Eigen::VectorXd& x_old,
                         const Eigen::VectorXd& x_new, const Eigen::VectorXd& comparator) {
  return eta * q.dot(x_new - comparator) + bregman(kind, x_new, x_old) - bregman(kind, comparator, x_old) +
         bregman(kind, comparator, x_new);
}

}  // namespace spmd
