#pragma once

#include "spmd/divergences.hpp"
#include "spmd/mixing.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>

namespace spmd {

/// Value reported when no representable n meets a tail inequality.
inline constexpr std::uint64_t kSaturatedN = std::uint64_t{1} << 62;

/**
 * Resolved constants of one parameter preset. Fields a preset does not use
 * keep their defaults (m = 1, tau = 1, z = 0).
 */
struct Schedule {
  std::string name;
  double eta = 0.0;
  std::uint64_t n = 1;
  std::uint64_t m = 1;
  double tau = 1.0;
  double z = 0.0;
  double eps = 0.0;
  double d_cap = 0.0;
  double mu = 1.0;
  double zeta = 0.0;
  /// Mixing time at the hitting probability that drives n.
  int t_mix = 1;
  double hit_prob = 1.0;
  /// Tail value at the chosen n.
  double tail = 0.0;
  int k = 1;

  bool n_saturated() const { return n >= kSaturatedN; }
};

/**
 * Smallest integer n >= 1 with tail(n) <= level. `tail` must be
 * non-increasing beyond `n_peak`; below it values are scanned directly up to
 * one million and otherwise assumed to exceed the level. Returns kSaturatedN
 * when no n up to 2^62 qualifies.
 */
std::uint64_t smallest_n(const std::function<double(double)>& tail, double level, double n_peak);

/// (n+1)/(1-gamma) [gamma^(n-1) + (1 - x/(2 t_mix))^(n-1)], evaluated in log space.
double tomc_tail(double n, double gamma, double hit_prob, int t_mix);

/// 4(n+1)/(1-gamma)[gamma^(n-1) + (1 - x/(2 t))^(n-1)] + 8 (1 - x/2)^ceil(n/t) / (1-gamma).
double vbe_eps_n(double n, double gamma, double nu_min, int t_mix);

/// Stepsize sqrt(2 (1-gamma)^2 ln|A| / (k |A|)) and the smallest n with eps_n/(1-gamma) <= eps_target/2.
Schedule schedule_vbe(int k, int n_actions, double gamma, const MixingProfile& profile, double eps_target);

/// Multi-trajectory TOMC preset (uniform starting policy).
Schedule schedule_tomc_multi(int k, int n_states, int n_actions, double gamma, const MixingProfile& profile,
                             double delta, const DivergenceKind& kind);

/// Single-trajectory TOMC preset (m = 1, uniform starting policy).
Schedule schedule_tomc_single(int k, int n_states, int n_actions, double gamma, const MixingProfile& profile,
                              double delta, const DivergenceKind& kind);

/// Z = 4 sqrt(ln(|S| k / delta)) / (1 - gamma).
double noise_envelope_z(int n_states, int k, double delta, double gamma);

using BoundParams = std::map<std::string, double>;

/**
 * Printed right-hand side of a named gap bound. Names and required keys:
 *   theorem1            k, n_actions, gamma, eps_n
 *   theorem2            k, gamma, d_cap, mu
 *   theorem2_noiseless  k, gamma, d_cap, mu   (eps term removed)
 *   theorem3            k, gamma, d_cap, mu, z, zeta
 *   prop5               k, gamma, n_actions, n_states, delta
 * Throws std::invalid_argument for an unknown name or a missing key.
 */
double bound_rhs(const std::string& name, const BoundParams& params);

}  // namespace spmd
