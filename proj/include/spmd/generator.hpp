#pragma once

#include "spmd/mdp.hpp"

#include <cstdint>

namespace spmd {

/// Garnet-style instance: `branching` random successors per (s, a), blended
/// with the uniform kernel by weight `mix`.
struct GeneratorSpec {
  int n_states = 10;
  int n_actions = 5;
  int branching = 3;
  std::uint64_t cost_seed = 1;
  std::uint64_t kernel_seed = 2;
  double mix = 0.05;
  double gamma = 0.9;

  void validate() const;
};

/**
 * P = (1 - mix) * sparse + mix * uniform, costs uniform on [0, 1]. Same
 * seeds give the same instance. Throws NumericError if the uniform policy's
 * chain fails the mixing diagnostics (possible only for mix = 0).
 */
Mdp generate_mdp(const GeneratorSpec& spec);

}  // namespace spmd
