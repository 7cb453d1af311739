#include "spmd/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace spmd {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = text.find_last_not_of(" \t\r");
  return text.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  T value{};
  in >> value;
  if (in.fail() || !in.eof()) throw std::invalid_argument("config: bad value '" + text + "' for key '" + key + "'");
  return value;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_number<int>(key, trim(item)));
  if (out.empty()) throw std::invalid_argument("config: empty list for key '" + key + "'");
  return out;
}

std::uint64_t capped(std::uint64_t value, std::uint64_t cap) { return std::min(value, cap); }

void write_manifest_header(std::ostream& out, const ExperimentConfig& config, const Mdp& mdp, const Plan& plan) {
  const Schedule& s = plan.schedule;
  out << std::setprecision(17);
  out << "evaluator=" << config.evaluator << '\n'
      << "divergence=" << config.divergence.to_string() << '\n'
      << "states=" << mdp.n_states() << '\n'
      << "actions=" << mdp.n_actions() << '\n'
      << "gamma=" << mdp.gamma() << '\n'
      << "k=" << plan.spmd.k << '\n'
      << "delta=" << config.delta << '\n'
      << "seed=" << config.seed << '\n'
      << "replications=" << config.replications << '\n'
      << "schedule=" << s.name << '\n'
      << "eta=" << plan.spmd.eta << '\n'
      << "eta_schedule=" << s.eta << '\n'
      << "n_schedule=" << s.n << (s.n_saturated() ? " (saturated)" : "") << '\n'
      << "n=" << plan.spmd.evaluator.n << '\n'
      << "m_schedule=" << s.m << '\n'
      << "m=" << plan.spmd.evaluator.m << '\n'
      << "tau=" << s.tau << '\n'
      << "tau_used=" << plan.spmd.evaluator.tau << '\n'
      << "Z=" << s.z << '\n'
      << "eps=" << s.eps << '\n'
      << "D=" << s.d_cap << '\n'
      << "mu=" << s.mu << '\n'
      << "zeta=" << s.zeta << '\n'
      << "t_mix=" << s.t_mix << '\n'
      << "tail=" << s.tail << '\n'
      << "C=" << plan.profile.c << '\n'
      << "rho=" << plan.profile.rho << '\n'
      << "nu_min=" << plan.profile.nu_min << '\n';
}

KSummary summarise(int k, const std::vector<RunRecord>& records, int failed, std::uint64_t samples_per_run) {
  KSummary out;
  out.k = k;
  out.replications = static_cast<int>(records.size()) + failed;
  out.failed = failed;
  out.samples_per_run = samples_per_run;
  if (records.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.mean_best_gap = out.q10_best_gap = out.q50_best_gap = out.q90_best_gap = out.mean_uniform_gap = nan;
    out.envelope_coverage = out.floor_coverage = nan;
    return out;
  }
  std::vector<double> gaps;
  double uniform_sum = 0.0, envelope = 0.0, floor = 0.0;
  for (const auto& r : records) {
    gaps.push_back(r.final_best_gap());
    uniform_sum += r.uniform_iterate_gap;
    envelope += r.envelope_held ? 1.0 : 0.0;
    floor += r.floor_held ? 1.0 : 0.0;
    out.three_point_violations += r.three_point.violations;
  }
  const double count = static_cast<double>(records.size());
  double gap_sum = 0.0;
  for (double g : gaps) gap_sum += g;
  out.mean_best_gap = gap_sum / count;
  out.q10_best_gap = quantile(gaps, 0.1);
  out.q50_best_gap = quantile(gaps, 0.5);
  out.q90_best_gap = quantile(gaps, 0.9);
  out.mean_uniform_gap = uniform_sum / count;
  out.envelope_coverage = envelope / count;
  out.floor_coverage = floor / count;
  return out;
}

void write_summary(const fs::path& path, const ExperimentSummary& summary) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << std::setprecision(17);
  out << "k,replications,failed,mean_best_gap,q10_best_gap,q50_best_gap,q90_best_gap,mean_uniform_gap,"
         "envelope_coverage,floor_coverage,three_point_violations,samples_per_run,sweep_slope\n";
  for (const auto& r : summary.rows)
    out << r.k << ',' << r.replications << ',' << r.failed << ',' << r.mean_best_gap << ',' << r.q10_best_gap << ','
        << r.q50_best_gap << ',' << r.q90_best_gap << ',' << r.mean_uniform_gap << ',' << r.envelope_coverage << ','
        << r.floor_coverage << ',' << r.three_point_violations << ',' << r.samples_per_run << ',' << summary.sweep_slope
        << '\n';
}

}  // namespace

KeyValues parse_key_values(std::istream& in) {
  KeyValues out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config line " + std::to_string(number) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw std::invalid_argument("config line " + std::to_string(number) + ": empty key");
    if (out.count(key)) throw std::invalid_argument("config line " + std::to_string(number) + ": duplicate key '" + key + "'");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

KeyValues load_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  return parse_key_values(in);
}

const std::vector<std::string>& ExperimentConfig::keys() {
  static const std::vector<std::string> names{
      "mdp.file",   "gen.states", "gen.actions",  "gen.branching", "gen.cost_seed", "gen.kernel_seed",
      "gen.mix",    "gen.gamma",  "divergence",   "evaluator",     "k",             "delta",
      "eps_target", "seed",       "replications", "out_dir",       "n_cap",         "m_cap",
      "sweep.k",    "eta",        "n",            "m",             "tau"};
  return names;
}

void ExperimentConfig::apply(const KeyValues& values) {
  for (const auto& [key, value] : values) {
    if (key == "mdp.file") mdp_file = value;
    else if (key == "gen.states") generator.n_states = parse_number<int>(key, value);
    else if (key == "gen.actions") generator.n_actions = parse_number<int>(key, value);
    else if (key == "gen.branching") generator.branching = parse_number<int>(key, value);
    else if (key == "gen.cost_seed") generator.cost_seed = parse_number<std::uint64_t>(key, value);
    else if (key == "gen.kernel_seed") generator.kernel_seed = parse_number<std::uint64_t>(key, value);
    else if (key == "gen.mix") generator.mix = parse_number<double>(key, value);
    else if (key == "gen.gamma") generator.gamma = parse_number<double>(key, value);
    else if (key == "divergence") divergence = DivergenceKind::parse(value);
    else if (key == "evaluator") evaluator = value;
    else if (key == "k") k = parse_number<int>(key, value);
    else if (key == "delta") delta = parse_number<double>(key, value);
    else if (key == "eps_target") eps_target = parse_number<double>(key, value);
    else if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
    else if (key == "replications") replications = parse_number<int>(key, value);
    else if (key == "out_dir") out_dir = value;
    else if (key == "n_cap") n_cap = parse_number<std::uint64_t>(key, value);
    else if (key == "m_cap") m_cap = parse_number<std::uint64_t>(key, value);
    else if (key == "sweep.k") sweep_k = parse_int_list(key, value);
    else if (key == "eta") eta = parse_number<double>(key, value);
    else if (key == "n") n = parse_number<int>(key, value);
    else if (key == "m") m = parse_number<int>(key, value);
    else if (key == "tau") tau = parse_number<double>(key, value);
    else throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

void ExperimentConfig::validate() const {
  static const std::vector<std::string> evaluators{"exact", "vbe1", "vbe2", "tomc_multi", "tomc_single"};
  if (std::find(evaluators.begin(), evaluators.end(), evaluator) == evaluators.end())
    throw std::invalid_argument("config: evaluator must be one of exact, vbe1, vbe2, tomc_multi, tomc_single");
  if (k < 1) throw std::invalid_argument("config: k must be at least 1");
  for (int kk : sweep_k)
    if (kk < 1) throw std::invalid_argument("config: sweep.k entries must be at least 1");
  if (replications < 1) throw std::invalid_argument("config: replications must be at least 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("config: delta must lie in (0, 1)");
  if (!(eps_target > 0.0)) throw std::invalid_argument("config: eps_target must be positive");
  if (n_cap < 1 || m_cap < 1) throw std::invalid_argument("config: caps must be at least 1");
  if (eta && !(*eta >= 0.0)) throw std::invalid_argument("config: eta must be non-negative");
  if (mdp_file && !fs::exists(*mdp_file)) throw std::invalid_argument("config: mdp file not found: " + *mdp_file);
  if (!mdp_file) generator.validate();
}

Mdp load_or_generate(const ExperimentConfig& config) {
  if (config.mdp_file) return Mdp::load(*config.mdp_file);
  return generate_mdp(config.generator);
}

Plan make_plan(const Mdp& mdp, const ExperimentConfig& config, int k) {
  Plan plan;
  plan.profile = mixing_constants(mdp, Policy::uniform(mdp.n_states(), mdp.n_actions()));
  const int ns = mdp.n_states();
  const int na = mdp.n_actions();
  const double gamma = mdp.gamma();
  EvalSpec spec;
  if (config.evaluator == "exact") {
    plan.schedule = schedule_tomc_multi(k, ns, na, gamma, plan.profile, config.delta, config.divergence);
    plan.schedule.name = "noiseless";
    spec.kind = EvalKind::Exact;
  } else if (config.evaluator == "vbe1" || config.evaluator == "vbe2") {
    plan.schedule = schedule_vbe(k, na, gamma, plan.profile, config.eps_target);
    spec.kind = config.evaluator == "vbe1" ? EvalKind::Vbe1 : EvalKind::Vbe2;
    spec.n = static_cast<int>(std::max<std::uint64_t>(2, capped(plan.schedule.n, config.n_cap)));
  } else {
    plan.schedule = config.evaluator == "tomc_multi"
                        ? schedule_tomc_multi(k, ns, na, gamma, plan.profile, config.delta, config.divergence)
                        : schedule_tomc_single(k, ns, na, gamma, plan.profile, config.delta, config.divergence);
    spec.kind = EvalKind::Tomc;
    spec.n = static_cast<int>(capped(plan.schedule.n, config.n_cap));
    spec.m = static_cast<int>(capped(plan.schedule.m, config.m_cap));
    spec.tau = plan.schedule.tau;
    plan.spmd.exploration_floor = plan.schedule.tau;
    plan.spmd.z_envelope = plan.schedule.z;
  }
  if (config.n) spec.n = *config.n;
  if (config.m) spec.m = *config.m;
  if (config.tau) spec.tau = *config.tau;
  spec.validate();

  plan.spmd.divergence = config.divergence;
  plan.spmd.evaluator = spec;
  plan.spmd.k = k;
  plan.spmd.eta = config.eta.value_or(plan.schedule.eta);
  plan.spmd.delta = config.delta;
  plan.spmd.seed = config.seed;
  plan.spmd.nu_floor = plan.profile.nu_min;
  return plan;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile: no values");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++count;
  }
  if (count < 2) return std::numeric_limits<double>::quiet_NaN();
  const double denom = count * sxx - sx * sx;
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (count * sxy - sx * sy) / denom;
}

ExperimentSummary run_experiment(const ExperimentConfig& config, std::ostream& log) {
  config.validate();
  const Mdp mdp = load_or_generate(config);
  const fs::path root(config.out_dir);
  fs::create_directories(root);
  const bool sweep = !config.sweep_k.empty();
  const std::vector<int> ks = sweep ? config.sweep_k : std::vector<int>{config.k};

  ExperimentSummary summary;
  summary.sweep_slope = std::numeric_limits<double>::quiet_NaN();
  std::ofstream top_manifest(root / "manifest.txt");
  if (!top_manifest) throw std::runtime_error("cannot write " + (root / "manifest.txt").string());
  top_manifest << std::setprecision(17);

  for (int k : ks) {
    const fs::path dir = sweep ? root / ("k_" + std::to_string(k)) : root;
    fs::create_directories(dir);
    const Plan plan = make_plan(mdp, config, k);
    std::ostringstream manifest;
    write_manifest_header(manifest, config, mdp, plan);
    if (plan.schedule.n > static_cast<std::uint64_t>(plan.spmd.evaluator.n) && plan.spmd.evaluator.kind != EvalKind::Exact)
      log << "k=" << k << ": scheduled n=" << plan.schedule.n << " capped to " << plan.spmd.evaluator.n << '\n';

    std::vector<RunRecord> records;
    int failed = 0;
    for (int r = 0; r < config.replications; ++r) {
      SpmdConfig run_config = plan.spmd;
      run_config.replication = static_cast<std::uint64_t>(r);
      try {
        RunRecord record = run(mdp, run_config);
        std::ofstream csv(dir / ("run_" + std::to_string(r) + ".csv"));
        write_run_csv(csv, record);
        manifest << "replication." << r << "=ok\n";
        records.push_back(std::move(record));
      } catch (const std::exception& e) {
        ++failed;
        manifest << "replication." << r << "=failed: " << e.what() << '\n';
        log << "k=" << k << " replication " << r << " failed: " << e.what() << '\n';
      }
    }
    summary.failures += failed;
    summary.rows.push_back(summarise(k, records, failed, samples_per_iteration(plan.spmd.evaluator) * k));
    if (sweep) {
      std::ofstream sub(dir / "manifest.txt");
      sub << manifest.str();
      top_manifest << "sweep.k_" << k << "=" << (dir / "manifest.txt").string() << '\n';
    } else {
      top_manifest << manifest.str();
    }
  }

  if (sweep) {
    std::vector<double> x, y;
    for (const auto& row : summary.rows) {
      x.push_back(row.k);
      y.push_back(row.mean_best_gap);
    }
    summary.sweep_slope = log_log_slope(x, y);
    top_manifest << "sweep_slope=" << summary.sweep_slope << '\n';
  }
  top_manifest << "failures=" << summary.failures << '\n';
  write_summary(root / "summary.csv", summary);
  return summary;
}

}  // namespace spmd
