#pragma once

#include "spmd/mdp.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <variant>
#include <vector>

namespace spmd {

/// Identifies one independent random stream: (master seed, run index, stream index).
struct StreamId {
  std::uint64_t seed = 0;
  std::uint64_t run = 0;
  std::uint64_t index = 0;
  friend bool operator==(const StreamId&, const StreamId&) = default;
};

/// Reproducible uniform source for one stream.
class RandomStream {
public:
  explicit RandomStream(const StreamId& id);

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Inverse-CDF draw from a probability row; never returns a zero-mass index.
  template <typename Row>
  int categorical(const Row& probs);

private:
  std::mt19937_64 engine_;
};

struct Step {
  int state = 0;
  int action = 0;
  double cost = 0.0;
};

/**
 * Realised path {Z_0, ..., Z_{n-1}} of the state-action chain. Trajectories
 * simulated with a terminal state additionally carry S_n; the action at
 * position n is the out-of-range sentinel, so no indicator on A_n can fire.
 */
struct Trajectory {
  static constexpr int kSentinelAction = -1;

  std::vector<Step> steps;
  std::optional<int> terminal_state;
  StreamId stream;

  int length() const { return static_cast<int>(steps.size()); }
  int state_at(int t) const;
  int action_at(int t) const;
  /// Number of sampled (s, a) pairs plus the terminal transition, if any.
  long samples() const { return length() + (terminal_state ? 1 : 0); }
};

/// Start of a simulation: a uniformly drawn state, a given state, or a given pair.
struct UniformStart {};
using Start = std::variant<UniformStart, int, StateAction>;

/**
 * Follows `policy` for `length` steps. When the start is a state (or drawn),
 * A_0 ~ pi(.|S_0). With `with_terminal`, S_length is also drawn.
 */
Trajectory simulate(const Mdp& mdp, const Policy& policy, const Start& start, int length, const StreamId& stream,
                    bool with_terminal = false);

/// min{t <= n-1 : Z_t = z}, or n.
int first_hit_z(const Trajectory& traj, const StateAction& z, int n);
/// min{t <= n-1 : S_t = s}, or n.
int first_hit_s(const Trajectory& traj, int s, int n);

/// CSV `t,state,action,cost`; the terminal row, if present, has an empty cost.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

template <typename Row>
int RandomStream::categorical(const Row& probs) {
  const double u = uniform();
  double cumulative = 0.0;
  int last_positive = -1;
  for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
    const double p = probs[i];
    if (p <= 0.0) continue;
    cumulative += p;
    last_positive = i;
    if (u < cumulative) return i;
  }
  return last_positive;
}

}  // namespace spmd
