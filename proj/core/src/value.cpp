#include "screenopt/value.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "screenopt/errors.hpp"
#include "screenopt/solver.hpp"

namespace screenopt {
namespace {

double marginal_closed_form(double q_alpha, double q_beta) {
  const double denom = 1.0 - q_beta + q_alpha;
  if (denom <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  return q_alpha * (1.0 - q_beta) / denom;
}

}  // namespace

const char* to_string(MarginalMethod m) noexcept {
  return m == MarginalMethod::ClosedForm ? "closed_form" : "finite_difference";
}

double allocation_value(const RiskDistribution& d, const ScreeningPolicy& p) {
  const double p_lo = std::clamp(p.screen_lower_mass(), 0.0, 1.0);
  return d.partial_expectation_mass(p_lo, 1.0);
}

double allocation_value_at(const RiskDistribution& d, const Budgets& b, double tol) {
  return allocation_value(d, solve_policy_auto(d, b, tol));
}

double marginal_value(const RiskDistribution& d, const Budgets& b) {
  const ScreeningPolicy p = solve_policy_auto(d, b);
  return marginal_closed_form(p.q_alpha, p.q_beta);
}

double second_derivative(const RiskDistribution& d, const Budgets& b) {
  if (!d.has_density()) {
    throw UnsupportedDistributionError("second derivative needs a density, got '" +
                                       d.spec_string() + "'");
  }
  const ScreeningPolicy p = solve_policy_auto(d, b, 1e-13);
  const double f_a = d.density(p.q_alpha);
  const double f_b = d.density(p.q_beta);
  const double denom_lin = 1.0 - p.q_beta + p.q_alpha;
  const double one_m_qb = 1.0 - p.q_beta;
  const double numer = one_m_qb * one_m_qb * one_m_qb * f_b +
                       p.q_alpha * p.q_alpha * p.q_alpha * f_a;
  return -numer / (f_a * f_b * denom_lin * denom_lin * denom_lin);
}

ValueCurve value_curve(const RiskDistribution& d, double beta,
                       std::span<const double> alpha_grid) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("curve beta must lie in (0,1)");
  if (alpha_grid.empty()) throw DomainError("curve alpha grid is empty");
  for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
    if (!(alpha_grid[i] >= 0.0 && alpha_grid[i] <= beta)) {
      std::ostringstream os;
      os << "curve alpha grid entry " << alpha_grid[i] << " outside [0, beta=" << beta << "]";
      throw DomainError(os.str());
    }
    if (i > 0 && alpha_grid[i] < alpha_grid[i - 1]) {
      throw DomainError("curve alpha grid must be sorted ascending");
    }
  }

  ValueCurve curve;
  curve.beta = beta;
  curve.marginal_method = d.kind() == RiskDistribution::Kind::Empirical
                              ? MarginalMethod::FiniteDifference
                              : MarginalMethod::ClosedForm;
  const double base_value = d.partial_expectation_mass(1.0 - beta, 1.0);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  curve.rows.reserve(alpha_grid.size());
  for (const double alpha : alpha_grid) {
    CurveRow row;
    row.alpha = alpha;
    try {
      const Budgets b(alpha, beta);
      const ScreeningPolicy p = alpha == 0.0
                                    ? no_screening_policy(d, b, SolverKind::FixedPoint)
                                    : fixed_point_solve(d, b, 1e-12).first;
      row.q_alpha = p.q_alpha;
      row.q_beta = p.q_beta;
      row.value = allocation_value(d, p);
      row.precision = row.value / beta;
      row.utility_gap = row.value - base_value;
      row.marginal = curve.marginal_method == MarginalMethod::ClosedForm
                         ? marginal_closed_form(p.q_alpha, p.q_beta)
                         : nan;
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
      row.q_alpha = row.q_beta = row.value = row.precision = row.marginal = row.utility_gap =
          nan;
    }
    curve.rows.push_back(std::move(row));
  }

  if (curve.marginal_method == MarginalMethod::FiniteDifference) {
    const auto& rows = curve.rows;
    std::vector<double> fd(rows.size(), nan);
    const auto ok = [&rows](std::size_t i) { return !rows[i].failed; };
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!ok(i)) continue;
      std::size_t lo = i;
      std::size_t hi = i;
      if (i > 0 && ok(i - 1)) lo = i - 1;
      if (i + 1 < rows.size() && ok(i + 1)) hi = i + 1;
      const double da = rows[hi].alpha - rows[lo].alpha;
      if (da > 0.0) fd[i] = (rows[hi].value - rows[lo].value) / da;
    }
    for (std::size_t i = 0; i < rows.size(); ++i) curve.rows[i].marginal = fd[i];
  }
  return curve;
}

}  // namespace screenopt
