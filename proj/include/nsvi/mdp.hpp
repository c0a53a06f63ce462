#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace nsvi {

/// Value function: one real per state.
using ValueFunction = std::vector<double>;

/// Deterministic policy: one action index per state.
using Policy = std::vector<int>;

inline constexpr double kGreedyTieTol = 1e-9;
inline constexpr double kDefaultTol = 1e-10;
inline constexpr double kRowSumTol = 1e-12;
inline constexpr double kAuditSlack = 1e-8;
inline constexpr long kMaxIterations = 1000000;
inline constexpr int kMaxDirectSolveStates = 2000;

/// Finite discounted MDP with a uniform action count and dense transition
/// rows. Treated as immutable once built; all operations on it are pure.
struct Mdp {
  int n_states = 0;
  int n_actions = 0;
  double gamma = 0.0;
  std::vector<double> rewards;      // [s * n_actions + a]
  std::vector<double> transitions;  // [(s * n_actions + a) * n_states + s2]

  Mdp() = default;
  Mdp(int states, int actions, double discount);

  double reward(int s, int a) const { return rewards[s * n_actions + a]; }
  double& reward(int s, int a) { return rewards[s * n_actions + a]; }
  double prob(int s, int a, int s2) const {
    return transitions[(s * n_actions + a) * static_cast<std::size_t>(n_states) + s2];
  }
  double& prob(int s, int a, int s2) {
    return transitions[(s * n_actions + a) * static_cast<std::size_t>(n_states) + s2];
  }
  /// Transition row for (s, a), indexed by next state.
  std::span<const double> row(int s, int a) const {
    return {transitions.data() + (s * n_actions + a) * static_cast<std::size_t>(n_states),
            static_cast<std::size_t>(n_states)};
  }

  bool operator==(const Mdp&) const = default;
};

/// Cyclic sequence of policies, executed from cycle[0] onward. The newest
/// policy comes first: cycle[0] acts at time 0, cycle[1] at time 1, and the
/// sequence wraps after cycle.size() steps.
struct PeriodicPolicy {
  std::vector<Policy> cycle;

  bool operator==(const PeriodicPolicy&) const = default;
};

/// Rule for picking one action out of a greedy set.
struct TieBreak {
  enum class Kind { lowest_index, highest_index, prefer };

  Kind kind = Kind::lowest_index;
  Policy preferred;  // used by Kind::prefer; one action per state

  static TieBreak lowest() { return {}; }
  static TieBreak highest() { return {Kind::highest_index, {}}; }
  static TieBreak prefer(Policy preferred_actions) {
    return {Kind::prefer, std::move(preferred_actions)};
  }
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// Checks the Mdp invariants: row-stochastic transitions (sum 1 within
/// kRowSumTol, no negative entries), finite rewards, 0 <= gamma < 1.
/// Violations are returned as data, one message per offending field.
ValidationReport validate_mdp(const Mdp& mdp);

/// Span seminorm: max(v) - min(v). Zero on constant vectors.
double span(const ValueFunction& v);

/// Infinity norm.
double max_norm(const ValueFunction& v);

/// ||u - v|| in the infinity norm.
double max_norm_diff(const ValueFunction& u, const ValueFunction& v);

/// base^e by repeated multiplication, e >= 0. Used instead of std::pow so
/// that gamma^1 == gamma bitwise and results are reproducible.
double pow_int(double base, int e);

/// One-step backup r(s,a) + gamma * sum_s' P(s'|s,a) v(s'). Summation runs
/// in ascending next-state order.
double q_value(const Mdp& mdp, const ValueFunction& v, int s, int a);

/// Linear Bellman operator for a fixed policy.
ValueFunction apply_bellman(const Mdp& mdp, const Policy& pi, const ValueFunction& v);

/// Optimal Bellman operator: per-state max over actions of the one-step backup.
ValueFunction apply_optimal_bellman(const Mdp& mdp, const ValueFunction& v);

/// Per-state set of actions whose backup is within tie_tol (absolute) of the
/// best one. Sets are sorted ascending and never empty.
std::vector<std::vector<int>> greedy_set(const Mdp& mdp, const ValueFunction& v,
                                         double tie_tol = kGreedyTieTol);

/// A greedy policy for v; ties resolved by tie_break.
Policy greedy_policy(const Mdp& mdp, const ValueFunction& v,
                     const TieBreak& tie_break = TieBreak::lowest(),
                     double tie_tol = kGreedyTieTol);

/// m-fold composition T_{p_0} T_{p_1} ... T_{p_{m-1}} v, i.e. the last list
/// element is applied first and policies[0] outermost.
ValueFunction compose_bellman(const Mdp& mdp, const std::vector<Policy>& policies,
                              const ValueFunction& v);

void check_value(const Mdp& mdp, const ValueFunction& v);
void check_policy(const Mdp& mdp, const Policy& pi);

}  // namespace nsvi
