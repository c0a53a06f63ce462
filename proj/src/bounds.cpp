#include "nsvi/bounds.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "nsvi/solvers.hpp"

namespace nsvi {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Shared inner expression of both loss bounds. The stationary and periodic
// bounds differ only in the denominator, so computing the numerator once
// keeps the two in exact agreement at m = 1.
double bound_inner(double gamma, int k, double eps, double delta) {
  const double gk = pow_int(gamma, k);
  return (gamma - gk) / (1.0 - gamma) * eps + gk * delta;
}

}  // namespace

void validate_bound_inputs(const BoundInputs& in) {
  require(in.gamma >= 0.0 && in.gamma < 1.0, "gamma must lie in [0, 1)");
  require(in.k >= 1, "k must be at least 1");
  require(in.m >= 1 && in.m <= in.k, "m must lie in [1, k]");
  require(in.eps >= 0.0, "eps must be nonnegative");
  require(in.delta >= 0.0, "delta must be nonnegative");
  require(in.eps_inf >= 0.0, "eps_inf must be nonnegative");
}

double stationary_loss_bound(const BoundInputs& in) {
  validate_bound_inputs(in);
  return bound_inner(in.gamma, in.k, in.eps, in.delta) / (1.0 - in.gamma);
}

double stationary_loss_bound(double gamma, int k, double eps, double delta) {
  BoundInputs in;
  in.gamma = gamma;
  in.k = k;
  in.eps = eps;
  in.delta = delta;
  return stationary_loss_bound(in);
}

double periodic_loss_bound(const BoundInputs& in) {
  validate_bound_inputs(in);
  return bound_inner(in.gamma, in.k, in.eps, in.delta) /
         (1.0 - pow_int(in.gamma, in.m));
}

double periodic_loss_bound(double gamma, int k, int m, double eps, double delta) {
  BoundInputs in;
  in.gamma = gamma;
  in.k = k;
  in.m = m;
  in.eps = eps;
  in.delta = delta;
  return periodic_loss_bound(in);
}

AsymptoticBounds asymptotic_bounds(double gamma, double eps_inf, double eps_span) {
  require(gamma >= 0.0 && gamma < 1.0, "gamma must lie in [0, 1)");
  require(eps_inf >= 0.0, "eps_inf must be nonnegative");
  require(eps_span >= 0.0, "eps_span must be nonnegative");
  const double one_minus = 1.0 - gamma;
  AsymptoticBounds out;
  out.classic = 2.0 * gamma / (one_minus * one_minus) * eps_inf;
  out.span_limit = gamma / (one_minus * one_minus) * eps_span;
  out.nonstat_limit = gamma / one_minus * eps_span;
  return out;
}

TightnessInstance build_tightness_instance(double gamma, int k, double eps,
                                           double delta) {
  require(gamma > 0.0 && gamma < 1.0, "gamma must lie in (0, 1)");
  require(k >= 1, "k must be at least 1");
  require(eps >= 0.0, "eps must be nonnegative");
  require(delta >= 0.0, "delta must be nonnegative");

  const int n = k + 1;
  Mdp mdp(n, 2, gamma);

  // Action 0 walks down the chain and absorbs at s_0; action 1 copies it
  // except at s_k, where it stays in place. All rewards are zero except the
  // stay reward, chosen so that staying ties with stepping down exactly when
  // the perturbed iteration reaches s_k.
  const double stay_reward = -bound_inner(gamma, k, eps, delta);
  for (int s = 0; s < n; ++s) {
    const int down = (s == 0) ? 0 : s - 1;
    mdp.transitions[(s * 2 + 0) * n + down] = 1.0;
    if (s < k) {
      mdp.transitions[(s * 2 + 1) * n + down] = 1.0;
    } else {
      mdp.transitions[(s * 2 + 1) * n + s] = 1.0;
      mdp.rewards[s * 2 + 1] = stay_reward;
    }
  }

  TightnessInstance out{.mdp = std::move(mdp),
                        .v0 = ValueFunction(n, 0.0),
                        .errors = {},
                        .stay_reward = stay_reward,
                        .predicted_loss = stationary_loss_bound(gamma, k, eps, delta),
                        .tie_break = {},
                        .k = k,
                        .eps = eps,
                        .delta = delta};
  out.v0[0] = -delta;

  // Iteration j < k shaves eps off state s_j; the final iteration is clean.
  std::vector<ValueFunction> seq;
  seq.reserve(static_cast<size_t>(k) - 1);
  for (int j = 1; j < k; ++j) {
    ValueFunction e(n, 0.0);
    e[j] = -eps;
    seq.push_back(std::move(e));
  }
  out.errors = ErrorModel::explicit_sequence(std::move(seq));

  Policy stay(n, 0);
  stay[k] = 1;
  out.tie_break = TieBreak::prefer(std::move(stay));
  return out;
}

TightnessRun run_tightness(const TightnessInstance& instance, double tol) {
  // Run the full k iterations with a zero error appended, so the trace ends
  // on the greedy step that faces the engineered tie at s_k.
  ErrorModel err = instance.errors;
  err.sequence.push_back(ValueFunction(instance.mdp.n_states, 0.0));

  TightnessRun out{.trace = run_avi(instance.mdp, instance.v0, instance.k, err,
                                    instance.tie_break),
                   .v_star = {},
                   .stay_policy = {},
                   .stay_value = {},
                   .measured_loss = 0.0,
                   .predicted_loss = instance.predicted_loss};
  out.v_star = solve_optimal(instance.mdp, tol).value;
  out.stay_policy = out.trace.policies.back();
  const EvalMethod method = instance.mdp.n_states <= kMaxDirectSolveStates
                                ? EvalMethod::direct
                                : EvalMethod::iterative;
  out.stay_value = evaluate_stationary(instance.mdp, out.stay_policy, method, tol);
  out.measured_loss = loss(out.v_star, out.stay_value);
  return out;
}

bool AuditReport::all_ok() const {
  for (const AuditEntry& e : entries) {
    if (!e.ok) return false;
  }
  return true;
}

double AuditReport::min_margin() const {
  double out = std::numeric_limits<double>::infinity();
  for (const AuditEntry& e : entries) out = std::min(out, e.margin);
  return out;
}

const AuditEntry* AuditReport::find(char check, int index) const {
  for (const AuditEntry& e : entries) {
    if (e.check == check && e.index == index) return &e;
  }
  return nullptr;
}

bool AuditReport::ok_for_m(int m) const {
  for (const AuditEntry& e : entries) {
    if (e.check == 'a' && !e.ok) return false;
  }
  const AuditEntry* b = find('b', m);
  const AuditEntry* c = find('c', m);
  return b != nullptr && c != nullptr && b->ok && c->ok;
}

AuditReport audit_trace_inequalities(const Mdp& mdp, const AviTrace& trace,
                                     const ValueFunction& v_star,
                                     const std::vector<int>& m_list,
                                     double tol) {
  check_value(mdp, v_star);
  const double gamma = mdp.gamma;
  const int k = trace.k;
  const TraceStats stats = trace_stats(trace, v_star);

  AuditReport report;
  auto push = [&report](char check, int index, double lhs, double rhs) {
    AuditEntry e{.check = check,
                 .index = index,
                 .lhs = lhs,
                 .rhs = rhs,
                 .margin = rhs - lhs,
                 .ok = false};
    e.ok = e.margin >= -report.slack;
    report.entries.push_back(e);
  };

  // (a) Error of the iterates themselves: each step contracts the distance
  // to v* and adds at most the worst max-norm error.
  const double d0 = max_norm_diff(v_star, trace.value_at(0));
  for (int j = 1; j <= k; ++j) {
    const double gj = pow_int(gamma, j);
    const double lhs = max_norm_diff(v_star, trace.value_at(j));
    const double rhs = gj * d0 + (1.0 - gj) / (1.0 - gamma) * stats.eps_inf;
    push('a', j, lhs, rhs);
  }

  const ValueFunction backed_up =
      apply_bellman(mdp, trace.policies.back(), trace.value_at(k - 1));
  for (int m : m_list) {
    const PeriodicPolicy pp = extract_periodic_policy(trace, m);
    const ValueFunction v_pm = evaluate_periodic(mdp, pp, tol);
    const double gm = pow_int(gamma, m);

    // (b) Distance between the last backed-up iterate and the periodic
    // policy's value, via one sweep of the m-step composed operator.
    const double lhs_b = max_norm_diff(backed_up, v_pm);
    const double rhs_b = gm * max_norm_diff(trace.value_at(k - m), v_pm) +
                         (gamma - gm) / (1.0 - gamma) * stats.eps_inf;
    push('b', m, lhs_b, rhs_b);

    // (c) The headline guarantee: measured loss against the closed form.
    const double lhs_c = loss(v_star, v_pm);
    const double rhs_c = periodic_loss_bound(gamma, k, m, stats.eps_span, stats.delta0);
    push('c', m, lhs_c, rhs_c);
  }
  return report;
}

}  // namespace nsvi
