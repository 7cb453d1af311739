// Command-line driver: gen, solve, run, sweep.

#include "spmd/exact.hpp"
#include "spmd/experiment.hpp"
#include "spmd/generator.hpp"
#include "spmd/mixing.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

namespace {

struct FlagMap {
  spmd::KeyValues values;

  /// Records the flag under its config key, only when given.
  void bind(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    app->add_option_function<std::string>(flag, [this, key](const std::string& v) { values[key] = v; }, help);
  }
};

void add_experiment_flags(CLI::App* app, FlagMap& flags, std::string& config_path) {
  app->add_option("-c,--config", config_path, "key=value config file (wins over flags)");
  flags.bind(app, "--mdp", "mdp.file", "MDP file instead of a generated instance");
  flags.bind(app, "--states", "gen.states", "generated |S|");
  flags.bind(app, "--actions", "gen.actions", "generated |A|");
  flags.bind(app, "--branching", "gen.branching", "successors per (s, a)");
  flags.bind(app, "--cost-seed", "gen.cost_seed", "generator cost seed");
  flags.bind(app, "--kernel-seed", "gen.kernel_seed", "generator kernel seed");
  flags.bind(app, "--mix", "gen.mix", "uniform blend weight");
  flags.bind(app, "--gamma", "gen.gamma", "discount factor");
  flags.bind(app, "--divergence", "divergence", "kl or tsallis:<p>");
  flags.bind(app, "--evaluator", "evaluator", "exact, vbe1, vbe2, tomc_multi, tomc_single");
  flags.bind(app, "--k", "k", "iterations");
  flags.bind(app, "--delta", "delta", "failure probability");
  flags.bind(app, "--eps-target", "eps_target", "target accuracy for the VBE schedule");
  flags.bind(app, "--seed", "seed", "master seed");
  flags.bind(app, "--replications", "replications", "independent replications");
  flags.bind(app, "--out-dir", "out_dir", "output directory");
  flags.bind(app, "--n-cap", "n_cap", "cap on scheduled trajectory length");
  flags.bind(app, "--m-cap", "m_cap", "cap on scheduled trajectory count");
  flags.bind(app, "--eta", "eta", "stepsize override");
  flags.bind(app, "--n", "n", "trajectory length override");
  flags.bind(app, "--m", "m", "trajectory count override");
  flags.bind(app, "--tau", "tau", "truncation threshold override");
}

spmd::ExperimentConfig merge_config(const FlagMap& flags, const std::string& config_path) {
  spmd::KeyValues merged = flags.values;
  if (!config_path.empty()) {
    for (const auto& [key, value] : spmd::load_key_values(config_path)) {
      const auto it = merged.find(key);
      if (it != merged.end() && it->second != value)
        std::clog << "warning: " << key << " given as '" << it->second << "' on the command line and '" << value
                  << "' in " << config_path << "; using the config file\n";
      merged[key] = value;
    }
  }
  spmd::ExperimentConfig config;
  config.apply(merged);
  return config;
}

int run_experiment_command(const spmd::ExperimentConfig& config) {
  const auto summary = spmd::run_experiment(config, std::clog);
  std::cout << std::setprecision(6);
  for (const auto& row : summary.rows)
    std::cout << "k=" << row.k << " mean_best_gap=" << row.mean_best_gap << " mean_uniform_gap=" << row.mean_uniform_gap
              << " failed=" << row.failed << '\n';
  if (!config.sweep_k.empty()) std::cout << "sweep_slope=" << summary.sweep_slope << '\n';
  std::cout << "outputs in " << config.out_dir << '\n';
  return summary.failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic policy mirror descent on tabular MDPs"};
  app.require_subcommand(1);

  spmd::GeneratorSpec gen_spec;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "generate a random ergodic MDP");
  gen->add_option("--states", gen_spec.n_states, "|S|");
  gen->add_option("--actions", gen_spec.n_actions, "|A|");
  gen->add_option("--branching", gen_spec.branching, "successors per (s, a)");
  gen->add_option("--cost-seed", gen_spec.cost_seed, "cost seed");
  gen->add_option("--kernel-seed", gen_spec.kernel_seed, "kernel seed");
  gen->add_option("--mix", gen_spec.mix, "uniform blend weight");
  gen->add_option("--gamma", gen_spec.gamma, "discount factor");
  gen->add_option("-o,--out", gen_out, "output file")->required();

  std::string solve_mdp;
  std::string solve_dir = ".";
  double solve_tol = 1e-12;
  auto* solve = app.add_subcommand("solve", "dump the exact optimum of an MDP");
  solve->add_option("--mdp", solve_mdp, "MDP file")->required()->check(CLI::ExistingFile);
  solve->add_option("--out-dir", solve_dir, "output directory");
  solve->add_option("--tol", solve_tol, "value iteration tolerance");

  FlagMap run_flags;
  std::string run_config;
  auto* run = app.add_subcommand("run", "run SPMD replications");
  add_experiment_flags(run, run_flags, run_config);

  FlagMap sweep_flags;
  std::string sweep_config;
  auto* sweep = app.add_subcommand("sweep", "run SPMD over a list of k values");
  add_experiment_flags(sweep, sweep_flags, sweep_config);
  sweep_flags.bind(sweep, "--ks", "sweep.k", "comma-separated k values");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      spmd::generate_mdp(gen_spec).save(gen_out);
      std::cout << "wrote " << gen_out << '\n';
      return 0;
    }
    if (solve->parsed()) {
      const auto mdp = spmd::Mdp::load(solve_mdp);
      const auto opt = spmd::optimal_values(mdp, solve_tol);
      const auto greedy = spmd::greedy_policy(opt.q);
      std::filesystem::create_directories(solve_dir);
      const std::filesystem::path dir(solve_dir);
      std::ofstream q_out(dir / "q_star.csv");
      spmd::write_qtable_csv(q_out, opt.q);
      std::ofstream v_out(dir / "v_star.csv");
      v_out << "s,value\n" << std::setprecision(17);
      for (int s = 0; s < mdp.n_states(); ++s) v_out << s << ',' << opt.v(s) << '\n';
      std::ofstream pi_out(dir / "greedy_policy.csv");
      pi_out << "s,action\n";
      for (int s = 0; s < mdp.n_states(); ++s) {
        int a = 0;
        greedy.row(s).maxCoeff(&a);
        pi_out << s << ',' << a << '\n';
      }
      const auto profile = spmd::mixing_constants(mdp, spmd::Policy::uniform(mdp.n_states(), mdp.n_actions()));
      std::cout << std::setprecision(10) << "sweeps=" << opt.sweeps
                << " f_star(uniform start)=" << opt.v.mean() << " C=" << profile.c << " rho=" << profile.rho
                << " nu_min=" << profile.nu_min << '\n';
      return 0;
    }
    if (run->parsed()) {
      auto config = merge_config(run_flags, run_config);
      config.sweep_k.clear();
      return run_experiment_command(config);
    }
    if (sweep->parsed()) {
      auto config = merge_config(sweep_flags, sweep_config);
      if (config.sweep_k.empty()) throw std::invalid_argument("sweep needs --ks or sweep.k");
      return run_experiment_command(config);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
