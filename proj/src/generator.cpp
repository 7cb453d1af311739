#include "spmd/generator.hpp"

#include "spmd/mixing.hpp"
#include "spmd/trajectory.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace spmd {

void GeneratorSpec::validate() const {
  if (n_states < 1 || n_actions < 1) throw std::invalid_argument("generator: need at least one state and one action");
  if (branching < 1 || branching > n_states) throw std::invalid_argument("generator: branching must lie in [1, |S|]");
  if (!(mix >= 0.0 && mix <= 1.0)) throw std::invalid_argument("generator: mix must lie in [0, 1]");
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("generator: gamma must lie in (0, 1)");
}

Mdp generate_mdp(const GeneratorSpec& spec) {
  spec.validate();
  const int ns = spec.n_states;
  const int na = spec.n_actions;

  RandomStream kernel_rng(StreamId{spec.kernel_seed, 0, 0});
  Eigen::MatrixXd transition = Eigen::MatrixXd::Constant(ns * na, ns, spec.mix / ns);
  std::vector<int> order(static_cast<std::size_t>(ns));
  std::vector<double> cuts;
  for (int row = 0; row < ns * na; ++row) {
    // Partial Fisher-Yates for the successor set.
    std::iota(order.begin(), order.end(), 0);
    for (int i = 0; i < spec.branching; ++i) {
      const int j = i + static_cast<int>(kernel_rng.uniform() * (ns - i));
      std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }
    // Successor masses are the gaps between sorted uniform cut points.
    cuts.assign(1, 0.0);
    for (int i = 1; i < spec.branching; ++i) cuts.push_back(kernel_rng.uniform());
    cuts.push_back(1.0);
    std::sort(cuts.begin(), cuts.end());
    for (int i = 0; i < spec.branching; ++i)
      transition(row, order[static_cast<std::size_t>(i)]) +=
          (1.0 - spec.mix) * (cuts[static_cast<std::size_t>(i) + 1] - cuts[static_cast<std::size_t>(i)]);
    transition.row(row) /= transition.row(row).sum();
  }

  RandomStream cost_rng(StreamId{spec.cost_seed, 1, 0});
  Eigen::MatrixXd cost(ns, na);
  for (int s = 0; s < ns; ++s)
    for (int a = 0; a < na; ++a) cost(s, a) = cost_rng.uniform();

  Mdp mdp(ns, na, std::move(transition), std::move(cost), spec.gamma);
  mixing_constants(mdp, Policy::uniform(ns, na));
  return mdp;
}

}  // namespace spmd
