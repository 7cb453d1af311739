#include "spmd/mdp.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace spmd {

namespace {

void check_row_stochastic(const Eigen::MatrixXd& m, double tol, const char* what) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double v = m(r, c);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0 + tol) {
        std::ostringstream msg;
        msg << what << ": entry (" << r << ", " << c << ") = " << v << " outside [0, 1]";
        throw std::invalid_argument(msg.str());
      }
    }
    const double sum = m.row(r).sum();
    if (std::abs(sum - 1.0) > tol) {
      std::ostringstream msg;
      msg << what << ": row " << r << " sums to " << std::setprecision(17) << sum;
      throw std::invalid_argument(msg.str());
    }
  }
}

}  // namespace

Mdp::Mdp(int n_states, int n_actions, Eigen::MatrixXd transition, Eigen::MatrixXd cost, double gamma)
    : n_states_(n_states),
      n_actions_(n_actions),
      transition_(std::move(transition)),
      cost_(std::move(cost)),
      gamma_(gamma) {
  if (n_states_ < 1 || n_actions_ < 1) throw std::invalid_argument("mdp needs at least one state and one action");
  if (!(gamma_ > 0.0 && gamma_ < 1.0)) throw std::invalid_argument("discount factor must lie in (0, 1)");
  if (transition_.rows() != n_states_ * n_actions_ || transition_.cols() != n_states_)
    throw std::invalid_argument("transition table has wrong shape");
  if (cost_.rows() != n_states_ || cost_.cols() != n_actions_)
    throw std::invalid_argument("cost table has wrong shape");
  check_row_stochastic(transition_, kRowSumTolerance, "transition");
  for (Eigen::Index s = 0; s < cost_.rows(); ++s)
    for (Eigen::Index a = 0; a < cost_.cols(); ++a)
      if (!(cost_(s, a) >= 0.0 && cost_(s, a) <= 1.0))
        throw std::invalid_argument("costs must lie in [0, 1]");
}

Mdp Mdp::read(std::istream& in) {
  std::string tag;
  int ns = 0, na = 0;
  double gamma = 0.0;
  if (!(in >> tag >> ns >> na >> gamma) || tag != "mdp")
    throw std::invalid_argument("mdp file: expected header `mdp |S| |A| gamma`");
  if (ns < 1 || na < 1) throw std::invalid_argument("mdp file: bad dimensions");
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(ns * na, ns);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(ns, na);
  std::vector<bool> seen(static_cast<std::size_t>(ns * na), false);
  for (int line = 0; line < ns * na; ++line) {
    int s = 0, a = 0;
    double cost = 0.0;
    if (!(in >> s >> a >> cost)) throw std::invalid_argument("mdp file: truncated body");
    if (s < 0 || s >= ns || a < 0 || a >= na) throw std::invalid_argument("mdp file: state/action out of range");
    const int r = s * na + a;
    if (seen[static_cast<std::size_t>(r)]) throw std::invalid_argument("mdp file: duplicate (s, a) line");
    seen[static_cast<std::size_t>(r)] = true;
    c(s, a) = cost;
    for (int next = 0; next < ns; ++next)
      if (!(in >> p(r, next))) throw std::invalid_argument("mdp file: truncated transition row");
  }
  return Mdp(ns, na, std::move(p), std::move(c), gamma);
}

Mdp Mdp::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open mdp file: " + path);
  return read(in);
}

void Mdp::write(std::ostream& out) const {
  out << std::setprecision(17);
  out << "mdp " << n_states_ << ' ' << n_actions_ << ' ' << gamma_ << '\n';
  for (int s = 0; s < n_states_; ++s) {
    for (int a = 0; a < n_actions_; ++a) {
      out << s << ' ' << a << ' ' << cost_(s, a);
      for (int next = 0; next < n_states_; ++next) out << ' ' << transition_(row(s, a), next);
      out << '\n';
    }
  }
}

void Mdp::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write mdp file: " + path);
  write(out);
}

Policy::Policy(Eigen::MatrixXd rows) : rows_(std::move(rows)) {
  if (rows_.rows() < 1 || rows_.cols() < 1) throw std::invalid_argument("policy needs a non-empty table");
  check_row_stochastic(rows_, kRowSumTolerance, "policy");
}

Policy Policy::uniform(int n_states, int n_actions) {
  return Policy(Eigen::MatrixXd::Constant(n_states, n_actions, 1.0 / n_actions));
}

Policy Policy::deterministic(const std::vector<int>& actions, int n_actions) {
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(actions.size()), n_actions);
  for (std::size_t s = 0; s < actions.size(); ++s) {
    if (actions[s] < 0 || actions[s] >= n_actions) throw std::invalid_argument("action index out of range");
    rows(static_cast<Eigen::Index>(s), actions[s]) = 1.0;
  }
  return Policy(std::move(rows));
}

bool Policy::interior() const { return (rows_.array() > 0.0).all(); }

bool Policy::interior_at(int s) const { return (rows_.row(s).array() > 0.0).all(); }

void Policy::set_row(int s, const Eigen::VectorXd& row) {
  if (row.size() != rows_.cols()) throw std::invalid_argument("policy row has wrong length");
  if ((row.array() < 0.0).any() || std::abs(row.sum() - 1.0) > kRowSumTolerance)
    throw std::invalid_argument("policy row is not a distribution");
  rows_.row(s) = row.transpose();
}

void check_compatible(const Mdp& mdp, const Policy& policy) {
  if (policy.n_states() != mdp.n_states() || policy.n_actions() != mdp.n_actions())
    throw std::invalid_argument("policy shape does not match mdp");
}

void check_distribution(const Eigen::VectorXd& dist, const char* what, double tol) {
  if ((dist.array() < 0.0).any() || std::abs(dist.sum() - 1.0) > tol)
    throw std::invalid_argument(std::string(what) + " is not a probability distribution");
}

Eigen::MatrixXd induced_kernel(const Mdp& mdp, const Policy& policy) {
  check_compatible(mdp, policy);
  const int ns = mdp.n_states();
  Eigen::MatrixXd kernel = Eigen::MatrixXd::Zero(ns, ns);
  for (int s = 0; s < ns; ++s)
    for (int a = 0; a < mdp.n_actions(); ++a)
      if (policy(s, a) != 0.0) kernel.row(s) += policy(s, a) * mdp.next_state_row(s, a);
  return kernel;
}

Eigen::VectorXd induced_cost(const Mdp& mdp, const Policy& policy) {
  check_compatible(mdp, policy);
  return (mdp.cost().array() * policy.matrix().array()).rowwise().sum();
}

void write_qtable_csv(std::ostream& out, const QTable& q) {
  out << "s,a,value\n" << std::setprecision(17);
  for (Eigen::Index s = 0; s < q.rows(); ++s)
    for (Eigen::Index a = 0; a < q.cols(); ++a) out << s << ',' << a << ',' << q(s, a) << '\n';
}

}  // namespace spmd
