#include "nsvi/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace nsvi {

Mdp::Mdp(int states, int actions, double discount)
    : n_states(states),
      n_actions(actions),
      gamma(discount),
      rewards(static_cast<std::size_t>(states) * actions, 0.0),
      transitions(static_cast<std::size_t>(states) * actions * states, 0.0) {
  if (states < 1) throw std::invalid_argument("Mdp: n_states must be >= 1");
  if (actions < 1) throw std::invalid_argument("Mdp: n_actions must be >= 1");
}

ValidationReport validate_mdp(const Mdp& mdp) {
  ValidationReport report;
  auto add = [&report](const std::string& msg) { report.violations.push_back(msg); };

  if (mdp.n_states < 1) add("n_states must be >= 1");
  if (mdp.n_actions < 1) add("n_actions must be >= 1");
  if (!(mdp.gamma >= 0.0)) add("gamma must be >= 0");
  if (!(mdp.gamma < 1.0)) add("gamma must be < 1");
  if (!report.ok()) return report;

  const auto expected_r = static_cast<std::size_t>(mdp.n_states) * mdp.n_actions;
  if (mdp.rewards.size() != expected_r) {
    add("rewards has wrong size");
    return report;
  }
  if (mdp.transitions.size() != expected_r * mdp.n_states) {
    add("transitions has wrong size");
    return report;
  }

  for (int s = 0; s < mdp.n_states; ++s) {
    for (int a = 0; a < mdp.n_actions; ++a) {
      if (!std::isfinite(mdp.reward(s, a))) {
        std::ostringstream os;
        os << "reward at (state " << s << ", action " << a << ") is not finite";
        add(os.str());
      }
      double sum = 0.0;
      bool finite = true;
      bool nonneg = true;
      for (int s2 = 0; s2 < mdp.n_states; ++s2) {
        const double p = mdp.prob(s, a, s2);
        if (!std::isfinite(p)) finite = false;
        if (p < 0.0) nonneg = false;
        sum += p;
      }
      if (!finite) {
        std::ostringstream os;
        os << "transition row at (state " << s << ", action " << a << ") has non-finite entries";
        add(os.str());
        continue;
      }
      if (!nonneg) {
        std::ostringstream os;
        os << "transition row at (state " << s << ", action " << a << ") has negative entries";
        add(os.str());
      }
      if (std::abs(sum - 1.0) > kRowSumTol) {
        std::ostringstream os;
        os << "transition row at (state " << s << ", action " << a << ") sums to " << sum
           << ", expected 1";
        add(os.str());
      }
    }
  }
  return report;
}

double span(const ValueFunction& v) {
  if (v.empty()) throw std::invalid_argument("span: empty vector");
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

double max_norm(const ValueFunction& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_norm_diff(const ValueFunction& u, const ValueFunction& v) {
  if (u.size() != v.size()) throw std::invalid_argument("max_norm_diff: size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) m = std::max(m, std::abs(u[i] - v[i]));
  return m;
}

double pow_int(double base, int e) {
  if (e < 0) throw std::invalid_argument("pow_int: negative exponent");
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

void check_value(const Mdp& mdp, const ValueFunction& v) {
  if (static_cast<int>(v.size()) != mdp.n_states)
    throw std::invalid_argument("value function length does not match n_states");
}

void check_policy(const Mdp& mdp, const Policy& pi) {
  if (static_cast<int>(pi.size()) != mdp.n_states)
    throw std::invalid_argument("policy length does not match n_states");
  for (int a : pi)
    if (a < 0 || a >= mdp.n_actions) throw std::invalid_argument("policy action out of range");
}

double q_value(const Mdp& mdp, const ValueFunction& v, int s, int a) {
  const auto pr = mdp.row(s, a);
  double acc = 0.0;
  for (int s2 = 0; s2 < mdp.n_states; ++s2) acc += pr[s2] * v[s2];
  return mdp.reward(s, a) + mdp.gamma * acc;
}

ValueFunction apply_bellman(const Mdp& mdp, const Policy& pi, const ValueFunction& v) {
  check_policy(mdp, pi);
  check_value(mdp, v);
  ValueFunction out(mdp.n_states);
  for (int s = 0; s < mdp.n_states; ++s) out[s] = q_value(mdp, v, s, pi[s]);
  return out;
}

ValueFunction apply_optimal_bellman(const Mdp& mdp, const ValueFunction& v) {
  check_value(mdp, v);
  ValueFunction out(mdp.n_states);
  for (int s = 0; s < mdp.n_states; ++s) {
    double best = q_value(mdp, v, s, 0);
    for (int a = 1; a < mdp.n_actions; ++a) best = std::max(best, q_value(mdp, v, s, a));
    out[s] = best;
  }
  return out;
}

std::vector<std::vector<int>> greedy_set(const Mdp& mdp, const ValueFunction& v, double tie_tol) {
  check_value(mdp, v);
  if (tie_tol < 0.0) throw std::invalid_argument("greedy_set: tie_tol must be >= 0");
  std::vector<std::vector<int>> sets(mdp.n_states);
  std::vector<double> q(mdp.n_actions);
  for (int s = 0; s < mdp.n_states; ++s) {
    double best = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < mdp.n_actions; ++a) {
      q[a] = q_value(mdp, v, s, a);
      best = std::max(best, q[a]);
    }
    for (int a = 0; a < mdp.n_actions; ++a)
      if (q[a] >= best - tie_tol) sets[s].push_back(a);
  }
  return sets;
}

Policy greedy_policy(const Mdp& mdp, const ValueFunction& v, const TieBreak& tie_break,
                     double tie_tol) {
  if (tie_break.kind == TieBreak::Kind::prefer) check_policy(mdp, tie_break.preferred);
  const auto sets = greedy_set(mdp, v, tie_tol);
  Policy pi(mdp.n_states);
  for (int s = 0; s < mdp.n_states; ++s) {
    const auto& set = sets[s];
    switch (tie_break.kind) {
      case TieBreak::Kind::lowest_index:
        pi[s] = set.front();
        break;
      case TieBreak::Kind::highest_index:
        pi[s] = set.back();
        break;
      case TieBreak::Kind::prefer: {
        const int want = tie_break.preferred[s];
        pi[s] = std::find(set.begin(), set.end(), want) != set.end() ? want : set.front();
        break;
      }
    }
  }
  return pi;
}

ValueFunction compose_bellman(const Mdp& mdp, const std::vector<Policy>& policies,
                              const ValueFunction& v) {
  if (policies.empty()) throw std::invalid_argument("compose_bellman: empty policy list");
  ValueFunction out = v;
  for (auto it = policies.rbegin(); it != policies.rend(); ++it)
    out = apply_bellman(mdp, *it, out);
  return out;
}

}  // namespace nsvi
