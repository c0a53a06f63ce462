#pragma once

#include <cstdint>
#include <vector>

#include "nsvi/mdp.hpp"

namespace nsvi {

/// How the per-iteration error vectors are produced.
///
/// random_span draws each entry uniform in [-bound/2, +bound/2], recenters by
/// the midrange, and rescales so the realized span equals `bound` exactly
/// (one stream per trace, seeded from `seed`). explicit_seq injects the given
/// vectors; its length must match the iteration count.
struct ErrorModel {
  enum class Kind { zero, explicit_seq, random_span };

  Kind kind = Kind::zero;
  std::vector<std::vector<double>> sequence;  // Kind::explicit_seq
  double span_bound = 0.0;                    // Kind::random_span
  std::uint64_t seed = 0;                     // Kind::random_span

  static ErrorModel zero() { return {}; }
  static ErrorModel explicit_sequence(std::vector<std::vector<double>> errors) {
    return {Kind::explicit_seq, std::move(errors), 0.0, 0};
  }
  static ErrorModel random_span(double bound, std::uint64_t seed) {
    return {Kind::random_span, {}, bound, seed};
  }
};

/// Full record of one noisy value-iteration run: v0, then per iteration
/// j = 1..k the greedy policy pi_j, the value v_j = T_{pi_j} v_{j-1} + e_j,
/// and the injected error e_j. policies[j-1], values[j-1], errors[j-1] hold
/// iteration j.
struct AviTrace {
  double gamma = 0.0;
  int k = 0;
  ValueFunction v0;
  std::vector<Policy> policies;
  std::vector<ValueFunction> values;
  std::vector<std::vector<double>> errors;

  /// v_j for j in [0, k]; j = 0 returns v0.
  const ValueFunction& value_at(int j) const;
};

struct TraceStats {
  double eps_span = 0.0;  // max_j span(e_j)
  double eps_inf = 0.0;   // max_j ||e_j||
  double delta0 = 0.0;    // span(v_star - v0), when v_star was supplied
  bool v_star_needed = true;
};

/// Runs k iterations of value iteration with injected errors: pick a greedy
/// policy for the current value, back it up, then add the error vector.
/// Deterministic given (inputs, seed).
AviTrace run_avi(const Mdp& mdp, const ValueFunction& v0, int k, const ErrorModel& err,
                 const TieBreak& tie_break = TieBreak::lowest(),
                 double tie_tol = kGreedyTieTol);

/// Cycle over the last m generated policies, newest first:
/// cycle[i] = pi_{k-i} for i in [0, m).
PeriodicPolicy extract_periodic_policy(const AviTrace& trace, int m);

/// Error statistics over iterations 1..upto (upto = -1 means all recorded).
TraceStats trace_stats(const AviTrace& trace, int upto = -1);

/// Same, plus delta0 = span(v_star - v0).
TraceStats trace_stats(const AviTrace& trace, const ValueFunction& v_star, int upto = -1);

}  // namespace nsvi
