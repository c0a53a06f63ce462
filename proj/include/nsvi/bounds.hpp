#pragma once

#include <vector>

#include "nsvi/avi.hpp"
#include "nsvi/mdp.hpp"

namespace nsvi {

/// Inputs to the closed-form loss bounds: discount, iteration count k, cycle
/// length m, span bound on per-iteration errors, delta = span(v* - v0), and
/// an infinity-norm error bound for the classic asymptotic comparison.
struct BoundInputs {
  double gamma = 0.0;
  int k = 1;
  int m = 1;
  double eps = 0.0;
  double delta = 0.0;
  double eps_inf = 0.0;
};

void validate_bound_inputs(const BoundInputs& in);

/// Loss bound for the last stationary policy after k noisy iterations:
/// 1/(1-gamma) * ((gamma - gamma^k)/(1-gamma) * eps + gamma^k * delta).
double stationary_loss_bound(const BoundInputs& in);
double stationary_loss_bound(double gamma, int k, double eps, double delta);

/// Loss bound for the periodic policy cycling over the last m policies:
/// 1/(1-gamma^m) * ((gamma - gamma^k)/(1-gamma) * eps + gamma^k * delta).
/// Equals the stationary bound at m = 1 and improves on it by the factor
/// (1-gamma)/(1-gamma^m) otherwise.
double periodic_loss_bound(const BoundInputs& in);
double periodic_loss_bound(double gamma, int k, int m, double eps, double delta);

struct AsymptoticBounds {
  double classic = 0.0;        // 2 gamma/(1-gamma)^2 * eps_inf
  double span_limit = 0.0;     // gamma/(1-gamma)^2 * eps_span (k -> inf, m = 1)
  double nonstat_limit = 0.0;  // gamma/(1-gamma)   * eps_span (k = m -> inf)
};

/// Large-k limits of the bounds above plus the classic infinity-norm bound.
AsymptoticBounds asymptotic_bounds(double gamma, double eps_inf, double eps_span);

/// The (k+1)-state deterministic chain on which the stationary bound is
/// attained with equality. States are s_0..s_k; action 0 steps down the chain
/// (s_0 absorbs), action 1 duplicates action 0 except at s_k, where it stays
/// in place with reward `stay_reward`. The error sequence perturbs state s_j
/// at iteration j < k by -eps; tie_break prefers the stay action so the
/// adversarial greedy choice is taken at the final tie.
struct TightnessInstance {
  Mdp mdp;
  ValueFunction v0;
  ErrorModel errors;  // explicit, length k-1
  double stay_reward = 0.0;
  double predicted_loss = 0.0;
  TieBreak tie_break;
  int k = 0;
  double eps = 0.0;
  double delta = 0.0;
};

TightnessInstance build_tightness_instance(double gamma, int k, double eps, double delta);

/// One full run on a tightness instance: k noisy iterations (the instance's
/// k-1 error vectors plus a zero final error), so the trace's last policy is
/// the preferred greedy policy for v_{k-1}. measured_loss is the loss of that
/// policy; it matches predicted_loss up to round-off.
struct TightnessRun {
  AviTrace trace;
  ValueFunction v_star;
  Policy stay_policy;
  ValueFunction stay_value;
  double measured_loss = 0.0;
  double predicted_loss = 0.0;
};

TightnessRun run_tightness(const TightnessInstance& instance, double tol = kDefaultTol);

/// One audited inequality. check is 'a' (value-error recursion, index = j),
/// 'b' (composed-operator distance, index = m), or 'c' (measured loss vs the
/// periodic bound, index = m). margin = rhs - lhs; ok means margin >= -slack.
struct AuditEntry {
  char check = 'a';
  int index = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool ok = false;
};

struct AuditReport {
  std::vector<AuditEntry> entries;
  double slack = kAuditSlack;

  bool all_ok() const;
  double min_margin() const;
  const AuditEntry* find(char check, int index) const;
  bool ok_for_m(int m) const;  // all 'a' entries plus the 'b'/'c' entries at m
};

/// Numerically audits, against a high-precision v_star, the inequalities that
/// connect a trace to the closed-form bounds:
///   (a) ||v* - v_j||    <= gamma^j ||v* - v0|| + (1-gamma^j)/(1-gamma) eps_inf
///   (b) ||T_{pi_k} v_{k-1} - v_{pi_{k,m}}||
///                        <= gamma^m ||v_{k-m} - v_{pi_{k,m}}|| + (gamma-gamma^m)/(1-gamma) eps_inf
///   (c) loss(v*, v_{pi_{k,m}}) <= periodic_loss_bound(eps_span, span(v* - v0))
/// eps_inf and eps_span are taken over all recorded errors.
AuditReport audit_trace_inequalities(const Mdp& mdp, const AviTrace& trace,
                                     const ValueFunction& v_star,
                                     const std::vector<int>& m_list,
                                     double tol = kDefaultTol);

}  // namespace nsvi
