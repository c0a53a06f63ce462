#include "nsvi/avi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nsvi/rng.hpp"

namespace nsvi {

namespace {

std::vector<double> draw_span_error(Rng& rng, int n, double bound) {
  std::vector<double> e(n, 0.0);
  if (bound == 0.0 || n < 2) return e;
  for (int i = 0; i < n; ++i) e[i] = rng.uniform(-bound / 2.0, bound / 2.0);
  auto [lo, hi] = std::minmax_element(e.begin(), e.end());
  const double mid = (*hi + *lo) / 2.0;
  const double spread = *hi - *lo;
  if (spread == 0.0) {
    std::fill(e.begin(), e.end(), 0.0);
    return e;
  }
  const int i_lo = static_cast<int>(lo - e.begin());
  const int i_hi = static_cast<int>(hi - e.begin());
  const double scale = bound / spread;
  const double half = bound / 2.0;
  for (double& x : e) x = std::clamp((x - mid) * scale, -half, half);
  // Pin the extremes so the realized span is the bound bitwise.
  e[i_lo] = -half;
  e[i_hi] = half;
  return e;
}

}  // namespace

const ValueFunction& AviTrace::value_at(int j) const {
  if (j < 0 || j > k) throw std::invalid_argument("AviTrace::value_at: index out of range");
  return j == 0 ? v0 : values[j - 1];
}

AviTrace run_avi(const Mdp& mdp, const ValueFunction& v0, int k, const ErrorModel& err,
                 const TieBreak& tie_break, double tie_tol) {
  check_value(mdp, v0);
  if (k < 1) throw std::invalid_argument("run_avi: k must be >= 1");
  if (err.kind == ErrorModel::Kind::explicit_seq &&
      static_cast<int>(err.sequence.size()) != k)
    throw std::invalid_argument("run_avi: explicit error sequence length does not match k");
  if (err.kind == ErrorModel::Kind::random_span && err.span_bound < 0.0)
    throw std::invalid_argument("run_avi: span bound must be >= 0");

  AviTrace trace;
  trace.gamma = mdp.gamma;
  trace.k = k;
  trace.v0 = v0;
  trace.policies.reserve(k);
  trace.values.reserve(k);
  trace.errors.reserve(k);

  Rng rng(err.seed);
  ValueFunction v = v0;
  for (int j = 1; j <= k; ++j) {
    Policy pi = greedy_policy(mdp, v, tie_break, tie_tol);
    ValueFunction next = apply_bellman(mdp, pi, v);
    std::vector<double> e;
    switch (err.kind) {
      case ErrorModel::Kind::zero:
        e.assign(mdp.n_states, 0.0);
        break;
      case ErrorModel::Kind::explicit_seq:
        e = err.sequence[j - 1];
        if (static_cast<int>(e.size()) != mdp.n_states)
          throw std::invalid_argument("run_avi: explicit error vector has wrong length");
        break;
      case ErrorModel::Kind::random_span:
        e = draw_span_error(rng, mdp.n_states, err.span_bound);
        break;
    }
    for (int s = 0; s < mdp.n_states; ++s) next[s] += e[s];
    trace.policies.push_back(std::move(pi));
    trace.errors.push_back(std::move(e));
    trace.values.push_back(next);
    v = std::move(next);
  }
  return trace;
}

PeriodicPolicy extract_periodic_policy(const AviTrace& trace, int m) {
  if (m < 1 || m > trace.k)
    throw std::invalid_argument("extract_periodic_policy: m must satisfy 1 <= m <= k");
  PeriodicPolicy pp;
  pp.cycle.reserve(m);
  for (int i = 0; i < m; ++i) pp.cycle.push_back(trace.policies[trace.k - 1 - i]);
  return pp;
}

TraceStats trace_stats(const AviTrace& trace, int upto) {
  if (upto < 0) upto = trace.k;
  if (upto > trace.k) throw std::invalid_argument("trace_stats: upto exceeds k");
  TraceStats stats;
  for (int j = 1; j <= upto; ++j) {
    stats.eps_span = std::max(stats.eps_span, span(trace.errors[j - 1]));
    stats.eps_inf = std::max(stats.eps_inf, max_norm(trace.errors[j - 1]));
  }
  return stats;
}

TraceStats trace_stats(const AviTrace& trace, const ValueFunction& v_star, int upto) {
  TraceStats stats = trace_stats(trace, upto);
  if (v_star.size() != trace.v0.size())
    throw std::invalid_argument("trace_stats: v_star length does not match v0");
  ValueFunction diff(v_star.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = v_star[i] - trace.v0[i];
  stats.delta0 = span(diff);
  stats.v_star_needed = false;
  return stats;
}

}  // namespace nsvi
