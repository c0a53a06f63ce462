#include "nsvi/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace nsvi {

namespace {

// Solves A x = b in place by Gaussian elimination with partial pivoting.
// A is n x n row-major. (I - gamma P_pi) is strictly diagonally dominant for
// gamma < 1, so a zero pivot cannot occur.
std::vector<double> solve_linear(std::vector<double> a, std::vector<double> b, int n) {
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    double best = std::abs(a[static_cast<std::size_t>(col) * n + col]);
    for (int r = col + 1; r < n; ++r) {
      const double cand = std::abs(a[static_cast<std::size_t>(r) * n + col]);
      if (cand > best) {
        best = cand;
        pivot = r;
      }
    }
    if (best == 0.0) throw std::runtime_error("solve_linear: singular matrix");
    if (pivot != col) {
      for (int c = col; c < n; ++c)
        std::swap(a[static_cast<std::size_t>(pivot) * n + c],
                  a[static_cast<std::size_t>(col) * n + c]);
      std::swap(b[pivot], b[col]);
    }
    const double inv = 1.0 / a[static_cast<std::size_t>(col) * n + col];
    for (int r = col + 1; r < n; ++r) {
      const double factor = a[static_cast<std::size_t>(r) * n + col] * inv;
      if (factor == 0.0) continue;
      a[static_cast<std::size_t>(r) * n + col] = 0.0;
      for (int c = col + 1; c < n; ++c)
        a[static_cast<std::size_t>(r) * n + c] -= factor * a[static_cast<std::size_t>(col) * n + c];
      b[r] -= factor * b[col];
    }
  }
  std::vector<double> x(n);
  for (int r = n - 1; r >= 0; --r) {
    double acc = b[r];
    for (int c = r + 1; c < n; ++c) acc -= a[static_cast<std::size_t>(r) * n + c] * x[c];
    x[r] = acc / a[static_cast<std::size_t>(r) * n + r];
  }
  return x;
}

void check_tol(double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
}

}  // namespace

SolveResult solve_optimal(const Mdp& mdp, double tol) {
  check_tol(tol);
  const double factor = mdp.gamma / (1.0 - mdp.gamma);
  ValueFunction v(mdp.n_states, 0.0);
  for (long it = 1; it <= kMaxIterations; ++it) {
    ValueFunction next = apply_optimal_bellman(mdp, v);
    const double cert = factor * max_norm_diff(next, v);
    v = std::move(next);
    if (cert <= tol) {
      Policy pi = greedy_policy(mdp, v);
      return {std::move(v), std::move(pi), it, cert};
    }
  }
  throw std::runtime_error("solve_optimal: iteration cap exceeded");
}

ValueFunction evaluate_stationary(const Mdp& mdp, const Policy& pi, EvalMethod method,
                                  double tol) {
  check_policy(mdp, pi);
  check_tol(tol);
  if (method == EvalMethod::iterative) {
    const double factor = mdp.gamma / (1.0 - mdp.gamma);
    ValueFunction v(mdp.n_states, 0.0);
    for (long it = 1; it <= kMaxIterations; ++it) {
      ValueFunction next = apply_bellman(mdp, pi, v);
      const double cert = factor * max_norm_diff(next, v);
      v = std::move(next);
      if (cert <= tol) return v;
    }
    throw std::runtime_error("evaluate_stationary: iteration cap exceeded");
  }

  if (mdp.n_states > kMaxDirectSolveStates)
    throw std::invalid_argument("evaluate_stationary: direct method limited to 2000 states");
  const int n = mdp.n_states;
  std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<double> b(n);
  for (int s = 0; s < n; ++s) {
    b[s] = mdp.reward(s, pi[s]);
    const auto pr = mdp.row(s, pi[s]);
    for (int s2 = 0; s2 < n; ++s2)
      a[static_cast<std::size_t>(s) * n + s2] = (s == s2 ? 1.0 : 0.0) - mdp.gamma * pr[s2];
  }
  ValueFunction v = solve_linear(std::move(a), std::move(b), n);

  // Residual check, with T_pi sweeps to polish if the elimination result does
  // not yet certify ||v - v_pi|| <= tol.
  for (long it = 0; it <= kMaxIterations; ++it) {
    ValueFunction tv = apply_bellman(mdp, pi, v);
    if (max_norm_diff(tv, v) / (1.0 - mdp.gamma) <= tol) return v;
    v = std::move(tv);
  }
  throw std::runtime_error("evaluate_stationary: direct solve failed to certify");
}

ValueFunction evaluate_periodic(const Mdp& mdp, const PeriodicPolicy& pp, double tol) {
  if (pp.cycle.empty()) throw std::invalid_argument("evaluate_periodic: empty cycle");
  check_tol(tol);
  for (const Policy& pi : pp.cycle) check_policy(mdp, pi);
  const int m = static_cast<int>(pp.cycle.size());
  const double gm = pow_int(mdp.gamma, m);
  const double factor = gm / (1.0 - gm);
  ValueFunction v(mdp.n_states, 0.0);
  for (long it = 1; it <= kMaxIterations; ++it) {
    ValueFunction next = compose_bellman(mdp, pp.cycle, v);
    const double cert = factor * max_norm_diff(next, v);
    v = std::move(next);
    if (cert <= tol) return v;
  }
  throw std::runtime_error("evaluate_periodic: iteration cap exceeded");
}

double loss(const ValueFunction& v_star, const ValueFunction& v_pi) {
  return max_norm_diff(v_star, v_pi);
}

}  // namespace nsvi
