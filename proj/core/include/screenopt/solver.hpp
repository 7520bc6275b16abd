#pragma once

#include <utility>
#include <vector>

#include "screenopt/budgets.hpp"
#include "screenopt/distribution.hpp"
#include "screenopt/policy.hpp"

namespace screenopt {

// Record of one fixed-point run. rho_sequence[0] is the initial value 0;
// rho_sequence[k] the k-th iterate. c_f is the raw contraction constant
// F^{-1}(1-beta+alpha) - F^{-1}(1-beta-alpha); it certifies geometric
// convergence only inside the guarantee regime (0 < alpha < beta,
// alpha + beta < 1), where it is < 1.
struct FixedPointTrace {
  std::vector<double> rho_sequence;
  double c_f = 0.0;
  double tolerance = 0.0;
  long max_iterations = 0;
};

inline constexpr double kDefaultSolverTol = 1e-10;
inline constexpr long kDefaultMaxIterations = 10000;

// Iterates rho <- mean of the quantile band [1-beta-alpha+alpha*rho,
// 1-beta+alpha*rho] from rho = 0 until successive iterates differ by less
// than tol. Works for every distribution kind; on finite samples the band
// mean takes finitely many values and the iteration lands exactly.
// Throws ConvergenceError (carrying the iterate sequence) after max_iter.
std::pair<ScreeningPolicy, FixedPointTrace> fixed_point_solve(
    const RiskDistribution& d, const Budgets& b, double tol = kDefaultSolverTol,
    long max_iter = kDefaultMaxIterations);

// Bisects the allocation-budget residual in q_beta over [F^{-1}(1-beta), 1].
// Needs a continuous CDF: Uniform01 and BetaSymmetric only.
ScreeningPolicy root_find_solve(const RiskDistribution& d, const Budgets& b,
                                double tol = kDefaultSolverTol);

// F^{-1}(1-beta+alpha) - F^{-1}(1-beta-alpha). RegimeError unless
// 0 < alpha < beta and alpha + beta < 1, the hypotheses under which this is
// a certified contraction modulus (< 1).
double contraction_constant(const RiskDistribution& d, const Budgets& b);

// Dispatch on SolverKind; ClosedFormUniform additionally requires a
// Uniform01 distribution. alpha = 0 collapses to the no-screening policy for
// every solver.
ScreeningPolicy solve_policy(const RiskDistribution& d, const Budgets& b, SolverKind kind,
                             double tol = kDefaultSolverTol,
                             long max_iter = kDefaultMaxIterations);

// Solver used when the caller has no preference: the closed form for
// Uniform01, root-finding for BetaSymmetric, the fixed point otherwise.
ScreeningPolicy solve_policy_auto(const RiskDistribution& d, const Budgets& b,
                                  double tol = kDefaultSolverTol);

}  // namespace screenopt
