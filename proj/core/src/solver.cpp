#include "screenopt/solver.hpp"

#include <cmath>
#include <sstream>

#include "screenopt/errors.hpp"

namespace screenopt {
namespace {

double raw_quantile_gap(const RiskDistribution& d, const Budgets& b) {
  // Masses are clamped so the gap stays defined outside the guarantee regime
  // (alpha + beta >= 1); inside it the clamps never bind.
  const double hi = std::min(1.0 - b.beta + b.alpha, 1.0);
  const double lo = std::max(1.0 - b.beta - b.alpha, 0.0);
  return d.quantile(hi) - d.quantile(lo);
}

ScreeningPolicy policy_from_band_masses(const RiskDistribution& d, const Budgets& b,
                                        double rho_star, SolverKind solver, int iterations,
                                        bool converged) {
  ScreeningPolicy p;
  p.solver = solver;
  p.iterations = iterations;
  p.converged = converged;
  p.in_guaranteed_regime = b.in_strict_regime();
  p.rho_star = rho_star;
  p.mass_direct = b.beta - b.alpha;
  p.mass_residual = b.alpha * (1.0 - rho_star);
  p.mass_screen = b.alpha;
  const double p_hi = 1.0 - b.beta + b.alpha * rho_star;
  const double p_lo = p_hi - b.alpha;
  p.q_beta = d.quantile(std::min(p_hi, 1.0));
  p.q_alpha = d.quantile(std::max(p_lo, 0.0));
  p.q_tilde_beta = d.quantile(1.0 - b.beta);
  return p;
}

}  // namespace

std::pair<ScreeningPolicy, FixedPointTrace> fixed_point_solve(const RiskDistribution& d,
                                                              const Budgets& b, double tol,
                                                              long max_iter) {
  if (!(tol > 0.0)) throw DomainError("fixed-point tolerance must be positive");
  if (max_iter < 1) throw DomainError("fixed-point max_iter must be at least 1");

  FixedPointTrace trace;
  trace.tolerance = tol;
  trace.max_iterations = max_iter;
  trace.c_f = b.alpha > 0.0 ? raw_quantile_gap(d, b) : 0.0;

  if (b.alpha == 0.0) {
    trace.rho_sequence = {no_screening_threshold(d, b)};
    return {no_screening_policy(d, b, SolverKind::FixedPoint), std::move(trace)};
  }

  double rho = 0.0;
  trace.rho_sequence.push_back(rho);
  for (long k = 1; k <= max_iter; ++k) {
    const double p_hi = std::min(1.0 - b.beta + b.alpha * rho, 1.0);
    const double p_lo = std::max(p_hi - b.alpha, 0.0);
    const double next = d.band_mean_mass(p_lo, p_hi);
    trace.rho_sequence.push_back(next);
    const double gap = std::fabs(next - rho);
    rho = next;
    if (gap < tol) {
      return {policy_from_band_masses(d, b, rho, SolverKind::FixedPoint,
                                      static_cast<int>(k), true),
              std::move(trace)};
    }
  }
  std::ostringstream os;
  os << "fixed point did not converge in " << max_iter << " iterations (tol=" << tol
     << ", last gap="
     << std::fabs(trace.rho_sequence.back() -
                  trace.rho_sequence[trace.rho_sequence.size() - 2])
     << ")";
  throw ConvergenceError(os.str(), trace.rho_sequence);
}

ScreeningPolicy root_find_solve(const RiskDistribution& d, const Budgets& b, double tol) {
  if (!(tol > 0.0)) throw DomainError("root-find tolerance must be positive");
  if (!d.has_density()) {
    throw UnsupportedDistributionError(
        "root-find solver needs a continuous distribution, got '" + d.spec_string() + "'");
  }
  if (b.alpha == 0.0) return no_screening_policy(d, b, SolverKind::RootFind);

  // Residual of the allocation-budget identity as a function of the band's
  // upper mass m = F(q_beta), with q_alpha eliminated through the screening
  // identity: the band always holds exactly alpha of mass, so its lower edge
  // sits at mass m - alpha. Mass coordinates keep the residual well
  // conditioned even when a quantile lands within a few ulps of the support
  // edge (extreme bimodal shapes), where a cdf/quantile round trip in x
  // coordinates would inject rounding error far above the bracket tolerance.
  // Strictly decreasing in m with slope magnitude below 1, nonnegative at
  // the no-screening mass 1-beta, and at most zero at m=1.
  const auto residual = [&](double m) {
    return d.partial_expectation_mass(std::max(m - b.alpha, 0.0), m) + 1.0 - m - b.beta;
  };

  double lo = 1.0 - b.beta;
  double hi = 1.0;
  const double r_lo = residual(lo);
  const double r_hi = residual(hi);
  if (r_lo < -1e-12 || r_hi > 1e-12) {
    std::ostringstream os;
    os << "allocation residual does not bracket a root: G(" << lo << ")=" << r_lo << ", G("
       << hi << ")=" << r_hi;
    throw BracketError(os.str());
  }

  // Bisect to a quarter of tol; the residual slope stays below 1 in mass
  // coordinates, so both budget residuals land inside tol.
  int iterations = 0;
  while (hi - lo > 0.25 * tol && iterations < 200) {
    const double mid = 0.5 * (lo + hi);
    if (residual(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++iterations;
  }

  const double m = 0.5 * (lo + hi);
  const double m_lo = std::max(m - b.alpha, 0.0);
  ScreeningPolicy p;
  p.solver = SolverKind::RootFind;
  p.iterations = iterations;
  p.converged = true;
  p.in_guaranteed_regime = b.in_strict_regime();
  p.q_beta = d.quantile(m);
  p.q_alpha = d.quantile(m_lo);
  p.q_tilde_beta = no_screening_threshold(d, b);
  p.rho_star = d.partial_expectation_mass(m_lo, m) / b.alpha;
  p.mass_direct = b.beta - b.alpha;
  p.mass_residual = b.alpha * (1.0 - p.rho_star);
  p.mass_screen = b.alpha;
  return p;
}

double contraction_constant(const RiskDistribution& d, const Budgets& b) {
  if (!(b.alpha > 0.0) || !(b.alpha < b.beta) || !(b.alpha + b.beta < 1.0)) {
    std::ostringstream os;
    os << "contraction constant requires 0 < alpha < beta and alpha + beta < 1, got alpha="
       << b.alpha << " beta=" << b.beta;
    throw RegimeError(os.str());
  }
  return raw_quantile_gap(d, b);
}

ScreeningPolicy solve_policy(const RiskDistribution& d, const Budgets& b, SolverKind kind,
                             double tol, long max_iter) {
  switch (kind) {
    case SolverKind::ClosedFormUniform:
      if (d.kind() != RiskDistribution::Kind::Uniform01) {
        throw DomainError("closed-form solver only applies to the uniform distribution, got '" +
                          d.spec_string() + "'");
      }
      return uniform_closed_form(b);
    case SolverKind::RootFind:
      return root_find_solve(d, b, tol);
    case SolverKind::FixedPoint:
      return fixed_point_solve(d, b, tol, max_iter).first;
  }
  return fixed_point_solve(d, b, tol, max_iter).first;
}

ScreeningPolicy solve_policy_auto(const RiskDistribution& d, const Budgets& b, double tol) {
  switch (d.kind()) {
    case RiskDistribution::Kind::Uniform01:
      return uniform_closed_form(b);
    case RiskDistribution::Kind::BetaSymmetric:
      return root_find_solve(d, b, tol);
    default:
      return fixed_point_solve(d, b, tol).first;
  }
}

}  // namespace screenopt
