#include "spmd/trajectory.hpp"

#include <array>
#include <iomanip>
#include <ostream>

namespace spmd {

RandomStream::RandomStream(const StreamId& id) {
  const std::array<std::uint32_t, 6> words{
      static_cast<std::uint32_t>(id.seed),  static_cast<std::uint32_t>(id.seed >> 32),
      static_cast<std::uint32_t>(id.run),   static_cast<std::uint32_t>(id.run >> 32),
      static_cast<std::uint32_t>(id.index), static_cast<std::uint32_t>(id.index >> 32)};
  std::seed_seq seq(words.begin(), words.end());
  engine_.seed(seq);
}

double RandomStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

int Trajectory::state_at(int t) const {
  if (t < length()) return steps[static_cast<std::size_t>(t)].state;
  if (t == length() && terminal_state) return *terminal_state;
  throw std::out_of_range("trajectory: state index past end");
}

int Trajectory::action_at(int t) const {
  if (t < length()) return steps[static_cast<std::size_t>(t)].action;
  if (t == length()) return kSentinelAction;
  throw std::out_of_range("trajectory: action index past end");
}

Trajectory simulate(const Mdp& mdp, const Policy& policy, const Start& start, int length, const StreamId& stream,
                    bool with_terminal) {
  check_compatible(mdp, policy);
  if (length < 1) throw std::invalid_argument("simulate: length must be at least 1");
  RandomStream rng(stream);
  Trajectory traj;
  traj.stream = stream;
  traj.steps.reserve(static_cast<std::size_t>(length));

  int s = 0;
  int a = -1;
  if (std::holds_alternative<UniformStart>(start)) {
    s = static_cast<int>(rng.uniform() * mdp.n_states());
  } else if (const int* state = std::get_if<int>(&start)) {
    s = *state;
  } else {
    const auto& z = std::get<StateAction>(start);
    s = z.state;
    a = z.action;
    if (a < 0 || a >= mdp.n_actions()) throw std::invalid_argument("simulate: start action out of range");
  }
  if (s < 0 || s >= mdp.n_states()) throw std::invalid_argument("simulate: start state out of range");
  if (a < 0) a = rng.categorical(policy.row(s));

  for (int t = 0; t < length; ++t) {
    traj.steps.push_back({s, a, mdp.cost(s, a)});
    s = rng.categorical(mdp.next_state_row(s, a));
    if (t + 1 < length) a = rng.categorical(policy.row(s));
  }
  if (with_terminal) traj.terminal_state = s;
  return traj;
}

int first_hit_z(const Trajectory& traj, const StateAction& z, int n) {
  if (n > traj.length()) throw std::invalid_argument("first_hit_z: trajectory shorter than n");
  for (int t = 0; t < n; ++t) {
    const Step& step = traj.steps[static_cast<std::size_t>(t)];
    if (step.state == z.state && step.action == z.action) return t;
  }
  return n;
}

int first_hit_s(const Trajectory& traj, int s, int n) {
  if (n > traj.length()) throw std::invalid_argument("first_hit_s: trajectory shorter than n");
  for (int t = 0; t < n; ++t)
    if (traj.steps[static_cast<std::size_t>(t)].state == s) return t;
  return n;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,state,action,cost\n" << std::setprecision(17);
  for (int t = 0; t < traj.length(); ++t) {
    const Step& step = traj.steps[static_cast<std::size_t>(t)];
    out << t << ',' << step.state << ',' << step.action << ',' << step.cost << '\n';
  }
  if (traj.terminal_state) out << traj.length() << ',' << *traj.terminal_state << ',' << Trajectory::kSentinelAction << ",\n";
}

}  // namespace spmd
