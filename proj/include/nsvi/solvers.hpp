#pragma once

#include "nsvi/mdp.hpp"

namespace nsvi {

/// Output of a fixed-point solve. certified_error is an a posteriori bound on
/// the infinity-norm distance between `value` and the true fixed point:
/// gamma/(1-gamma) * ||last residual|| for value-iteration solves,
/// residual/(1-gamma) for direct linear solves, gamma^m/(1-gamma^m) * residual
/// for periodic solves.
struct SolveResult {
  ValueFunction value;
  Policy policy;
  long iterations = 0;
  double certified_error = 0.0;
};

enum class EvalMethod { direct, iterative };

/// Optimal value and a greedy policy for it, by value iteration from zero.
/// Stops once gamma/(1-gamma) * ||Tv - v|| <= tol, which certifies
/// ||value - v*|| <= tol.
SolveResult solve_optimal(const Mdp& mdp, double tol = kDefaultTol);

/// Value of a stationary policy: the fixed point of T_pi. The direct method
/// solves (I - gamma P_pi) v = r_pi by Gaussian elimination with partial
/// pivoting (n_states <= kMaxDirectSolveStates) and is residual-checked; the
/// iterative method applies T_pi until the contraction certificate meets tol.
ValueFunction evaluate_stationary(const Mdp& mdp, const Policy& pi,
                                  EvalMethod method = EvalMethod::direct,
                                  double tol = kDefaultTol);

/// Value of a periodic non-stationary policy at phase 0 (cycle[0] acts
/// first): the unique fixed point of the composed operator
/// T_{cycle[0]} ... T_{cycle[m-1]}, found by iterating the composition.
ValueFunction evaluate_periodic(const Mdp& mdp, const PeriodicPolicy& pp,
                                double tol = kDefaultTol);

/// ||v_star - v_pi|| in the infinity norm.
double loss(const ValueFunction& v_star, const ValueFunction& v_pi);

}  // namespace nsvi
