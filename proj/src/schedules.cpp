#include "spmd/schedules.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace spmd {

namespace {

constexpr double kScanLimit = 1e6;

void check_common(int k, int n_actions, double gamma) {
  if (k < 1) throw std::invalid_argument("schedule: k must be at least 1");
  if (n_actions < 1) throw std::invalid_argument("schedule: need at least one action");
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("schedule: gamma must lie in (0, 1)");
}

void check_profile(const MixingProfile& profile) {
  if (!(profile.nu_min > 0.0) || !(profile.rho > 0.0 && profile.rho < 1.0) || !(profile.c >= 1.0))
    throw std::invalid_argument("schedule: mixing profile missing or invalid");
}

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("schedule: delta must lie in (0, 1)");
}

/// (n+1) a^(n-1) peaks at n = -1/ln(a) - 1.
double power_peak(double a) {
  if (a <= 0.0) return 1.0;
  if (a >= 1.0) return std::numeric_limits<double>::infinity();
  return std::max(1.0, -1.0 / std::log(a) - 1.0);
}

double pow_log(double base, double exponent) {
  if (exponent == 0.0) return 1.0;
  if (base <= 0.0) return 0.0;
  return std::exp(exponent * std::log(base));
}

std::uint64_t to_count(double n) {
  if (!(n < static_cast<double>(kSaturatedN))) return kSaturatedN;
  return static_cast<std::uint64_t>(n);
}

/// Shared TOMC preset tail: n from the hitting tail at level eps / (4|A|).
void resolve_tomc_n(Schedule& out, int n_actions, double gamma, const MixingProfile& profile) {
  out.hit_prob = profile.nu_min * out.tau;
  if (!(out.hit_prob > 0.0)) {
    // tau underflowed: no finite n meets the tail.
    out.t_mix = std::numeric_limits<int>::max();
    out.n = kSaturatedN;
    out.tail = std::numeric_limits<double>::infinity();
    return;
  }
  out.t_mix = profile.t_mix(out.hit_prob);
  const double level = out.eps / (4.0 * n_actions);
  const double a = 1.0 - out.hit_prob / (2.0 * out.t_mix);
  const double peak = std::max(power_peak(gamma), power_peak(a));
  const double hit = out.hit_prob;
  const int t = out.t_mix;
  out.n = smallest_n([&](double n) { return tomc_tail(n, gamma, hit, t); }, level, peak);
  out.tail = tomc_tail(static_cast<double>(out.n), gamma, hit, t);
}

double need(const BoundParams& params, const std::string& name, const std::string& key) {
  const auto it = params.find(key);
  if (it == params.end()) throw std::invalid_argument("bound_rhs(" + name + "): missing parameter '" + key + "'");
  return it->second;
}

}  // namespace

std::uint64_t smallest_n(const std::function<double(double)>& tail, double level, double n_peak) {
  const double cap = static_cast<double>(kSaturatedN);
  n_peak = std::min(n_peak, cap);
  const double scan_end = std::min(std::max(n_peak, 1.0), kScanLimit);
  for (double n = 1.0; n <= scan_end; n += 1.0)
    if (tail(n) <= level) return to_count(n);

  // Non-increasing from here on: double until the level is met, then bisect.
  double lo = std::floor(scan_end);
  double hi = std::max(lo + 1.0, std::ceil(std::max(n_peak, 1.0)));
  while (tail(hi) > level) {
    lo = hi;
    hi *= 2.0;
    if (hi >= cap) {
      if (tail(cap) > level) return kSaturatedN;
      hi = cap;
      break;
    }
  }
  // Invariant: tail(lo) > level >= tail(hi).
  while (hi - lo > 1.0) {
    const double mid = std::floor(lo + (hi - lo) / 2.0);
    if (mid <= lo || mid >= hi) break;
    (tail(mid) <= level ? hi : lo) = mid;
  }
  return to_count(hi);
}

double tomc_tail(double n, double gamma, double hit_prob, int t_mix) {
  const double miss = 1.0 - hit_prob / (2.0 * t_mix);
  return (n + 1.0) / (1.0 - gamma) * (pow_log(gamma, n - 1.0) + pow_log(miss, n - 1.0));
}

double vbe_eps_n(double n, double gamma, double nu_min, int t_mix) {
  const double miss = 1.0 - nu_min / (2.0 * t_mix);
  const double blocks = std::ceil(n / t_mix);
  return 4.0 * (n + 1.0) / (1.0 - gamma) * (pow_log(gamma, n - 1.0) + pow_log(miss, n - 1.0)) +
         8.0 * pow_log(1.0 - nu_min / 2.0, blocks) / (1.0 - gamma);
}

double noise_envelope_z(int n_states, int k, double delta, double gamma) {
  check_delta(delta);
  return 4.0 * std::sqrt(std::log(static_cast<double>(n_states) * k / delta)) / (1.0 - gamma);
}

Schedule schedule_vbe(int k, int n_actions, double gamma, const MixingProfile& profile, double eps_target) {
  check_common(k, n_actions, gamma);
  check_profile(profile);
  if (!(eps_target > 0.0)) throw std::invalid_argument("schedule_vbe: eps_target must be positive");
  Schedule out;
  out.name = "vbe";
  out.k = k;
  const double a = static_cast<double>(n_actions);
  out.eta = std::sqrt(2.0 * (1.0 - gamma) * (1.0 - gamma) * std::log(a) / (k * a));
  out.d_cap = std::log(a);
  out.mu = 1.0;
  out.hit_prob = profile.nu_min;
  out.t_mix = profile.t_mix(profile.nu_min);
  out.eps = eps_target;
  const double level = eps_target / 2.0 * (1.0 - gamma);
  const double miss = 1.0 - profile.nu_min / (2.0 * out.t_mix);
  const double peak = std::max(power_peak(gamma), power_peak(miss));
  const double nu = profile.nu_min;
  const int t = out.t_mix;
  out.n = std::max<std::uint64_t>(2, smallest_n([&](double n) { return vbe_eps_n(n, gamma, nu, t); }, level, peak));
  out.tail = vbe_eps_n(static_cast<double>(out.n), gamma, nu, t);
  return out;
}

Schedule schedule_tomc_multi(int k, int n_states, int n_actions, double gamma, const MixingProfile& profile,
                             double delta, const DivergenceKind& kind) {
  check_common(k, n_actions, gamma);
  check_profile(profile);
  check_delta(delta);
  if (n_states < 1) throw std::invalid_argument("schedule: need at least one state");
  Schedule out;
  out.name = "tomc_multi";
  out.k = k;
  const double a = static_cast<double>(n_actions);
  const double big_m = 1.0 / (1.0 - gamma);
  out.mu = strong_convexity_modulus(kind, n_actions);
  out.d_cap = 2.0 * uniform_vertex_divergence(kind, n_actions);
  out.eta = 0.5 * std::sqrt(out.d_cap * out.mu / (k * big_m * big_m));
  out.eps = big_m / 2.0 * std::sqrt(out.d_cap / (out.mu * k));
  out.tau = 1.0 / a;
  if (n_actions > 1)
    out.tau = std::min({divergence_floor(kind, out.d_cap, gamma, n_actions), proposition_floor(kind, 2.0, gamma, n_actions),
                        1.0 / a});
  const double z_size = static_cast<double>(n_states) * a;
  if (out.eps > 0.0) {
    const double m = std::ceil(a * a * std::log(2.0 * z_size * k / delta) / ((1.0 - gamma) * (1.0 - gamma) * out.eps * out.eps));
    out.m = to_count(m);
    resolve_tomc_n(out, n_actions, gamma, profile);
  } else {
    // Single action: nothing to estimate.
    out.m = 1;
    out.hit_prob = profile.nu_min;
    out.t_mix = profile.t_mix(out.hit_prob);
  }
  return out;
}

Schedule schedule_tomc_single(int k, int n_states, int n_actions, double gamma, const MixingProfile& profile,
                              double delta, const DivergenceKind& kind) {
  check_common(k, n_actions, gamma);
  check_profile(profile);
  check_delta(delta);
  if (n_states < 1) throw std::invalid_argument("schedule: need at least one state");
  Schedule out;
  out.name = "tomc_single";
  out.k = k;
  const double a = static_cast<double>(n_actions);
  const double big_m = 1.0 / (1.0 - gamma);
  const double log_term = std::log(static_cast<double>(n_states) * k / delta);
  out.z = noise_envelope_z(n_states, k, delta, gamma);
  out.eps = 2.0 / (1.0 - gamma) * std::sqrt(log_term / k);
  out.mu = strong_convexity_modulus(kind, n_actions);
  out.d_cap = (2.0 + out.z) * uniform_vertex_divergence(kind, n_actions);
  out.zeta = std::min(std::sqrt(2.0 * out.d_cap * out.mu / ((2.0 + out.z) * big_m * big_m)), out.d_cap / (2.0 + out.z));
  out.eta = out.zeta / std::sqrt(static_cast<double>(k));
  out.tau = 1.0 / a;
  if (n_actions > 1)
    out.tau = std::min({divergence_floor(kind, out.d_cap, gamma, n_actions),
                        proposition_floor(kind, 2.0 + out.z, gamma, n_actions), 1.0 / a});
  out.m = 1;
  resolve_tomc_n(out, n_actions, gamma, profile);
  return out;
}

double bound_rhs(const std::string& name, const BoundParams& params) {
  const auto get = [&](const std::string& key) { return need(params, name, key); };
  if (name == "theorem1") {
    const double k = get("k"), a = get("n_actions"), gamma = get("gamma"), eps_n = get("eps_n");
    return std::sqrt(2.0 * a * std::log(a) / (k * std::pow(1.0 - gamma, 4))) + eps_n / (1.0 - gamma);
  }
  if (name == "theorem2" || name == "theorem2_noiseless") {
    const double k = get("k"), gamma = get("gamma"), d_cap = get("d_cap"), mu = get("mu");
    const double big_m = 1.0 / (1.0 - gamma);
    const double factor = name == "theorem2" ? 3.0 : 2.0;
    return factor * big_m / (1.0 - gamma) * std::sqrt(d_cap / (mu * k));
  }
  if (name == "theorem3") {
    const double k = get("k"), gamma = get("gamma"), d_cap = get("d_cap"), mu = get("mu"), z = get("z"),
                 zeta = get("zeta");
    const double big_m = 1.0 / (1.0 - gamma);
    const double root_k = std::sqrt(k);
    return d_cap / ((2.0 + z) * zeta * (1.0 - gamma) * root_k) + zeta * big_m * big_m / (2.0 * mu * (1.0 - gamma) * root_k) +
           z / ((1.0 - gamma) * root_k);
  }
  if (name == "prop5") {
    const double k = get("k"), gamma = get("gamma"), a = get("n_actions"), s = get("n_states"), delta = get("delta");
    const double big_m = 1.0 / (1.0 - gamma);
    return 4.0 * big_m / (1.0 - gamma) * std::sqrt(std::pow(a, 1.5) / k) +
           4.0 * std::sqrt(std::log(s * k / delta)) / ((1.0 - gamma) * (1.0 - gamma) * std::sqrt(k));
  }
  throw std::invalid_argument("bound_rhs: unknown bound '" + name + "'");
}

}  // namespace spmd
