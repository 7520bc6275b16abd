#pragma once

#include <span>
#include <string>
#include <vector>

#include "screenopt/budgets.hpp"
#include "screenopt/distribution.hpp"
#include "screenopt/policy.hpp"

namespace screenopt {

enum class MarginalMethod { ClosedForm, FiniteDifference };
const char* to_string(MarginalMethod m) noexcept;

// Expected number of positives served per capita under a solved policy:
// screened positives plus the direct and residual mass above the band, which
// collapses to the integral of the quantile function over
// [screen_lower_mass, 1].
double allocation_value(const RiskDistribution& d, const ScreeningPolicy& p);

// Solves (auto solver) and evaluates in one step.
double allocation_value_at(const RiskDistribution& d, const Budgets& b,
                           double tol = 1e-12);

// dV*/d(alpha) = q_alpha (1 - q_beta) / (1 - q_beta + q_alpha), evaluated at
// the solved thresholds. At alpha = 0 both thresholds coincide and this
// equals q (1 - q) at the no-screening threshold.
double marginal_value(const RiskDistribution& d, const Budgets& b);

// d^2 V*/d(alpha)^2 = -[(1-q_beta)^3 f(q_beta) + q_alpha^3 f(q_alpha)]
//                     / [f(q_alpha) f(q_beta) (1 - q_beta + q_alpha)^3].
// Needs a density; UnsupportedDistributionError otherwise. Always <= 0.
double second_derivative(const RiskDistribution& d, const Budgets& b);

struct CurveRow {
  double alpha = 0.0;
  double q_alpha = 0.0;
  double q_beta = 0.0;
  double value = 0.0;
  double precision = 0.0;
  double marginal = 0.0;
  double utility_gap = 0.0;
  bool failed = false;
  std::string error;
};

struct ValueCurve {
  std::vector<CurveRow> rows;
  double beta = 0.0;
  MarginalMethod marginal_method = MarginalMethod::ClosedForm;
};

// Sweeps the screening budget over alpha_grid (sorted ascending, all within
// [0, beta]) at fixed beta. precision = value / beta; utility_gap = value
// minus the no-screening value. Marginals use the closed form at the solved
// thresholds for analytic distributions and centered finite differences of
// the value column for Empirical (one-sided at the grid ends). A row whose
// solve fails is marked failed with NaN numerics and the sweep continues.
ValueCurve value_curve(const RiskDistribution& d, double beta,
                       std::span<const double> alpha_grid);

}  // namespace screenopt
