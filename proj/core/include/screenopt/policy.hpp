#pragma once

#include <string>

#include "screenopt/budgets.hpp"
#include "screenopt/distribution.hpp"

namespace screenopt {

enum class SolverKind { ClosedFormUniform, RootFind, FixedPoint };

const char* to_string(SolverKind kind) noexcept;
SolverKind solver_kind_from_string(const std::string& name);

// A solved two-stage policy. Scores in (q_alpha, q_beta] are screened (their
// outcome is revealed; positives are then served), scores above q_beta are
// served directly, and q_tilde_beta is the threshold the allocation budget
// alone would induce with no screening. rho_star is the fixed point of the
// screening-band mean: the expected positive rate inside the band.
//
// Mass accounting (fractions of the population):
//   mass_direct   = beta - alpha          served straight from the top
//   mass_residual = alpha * (1 - rho*)    budget freed by screened negatives
//   mass_screen   = alpha                 screened band width
//
// Invariants: 0 <= q_alpha <= q_tilde_beta <= q_beta <= 1, and the three
// masses are nonnegative with direct + screen <= 1.
struct ScreeningPolicy {
  double q_alpha = 0.0;
  double q_beta = 0.0;
  double q_tilde_beta = 0.0;
  double rho_star = 0.0;
  double mass_direct = 0.0;
  double mass_residual = 0.0;
  double mass_screen = 0.0;
  SolverKind solver = SolverKind::FixedPoint;
  int iterations = 0;
  bool converged = false;
  bool in_guaranteed_regime = false;

  double alpha() const noexcept { return mass_screen; }
  double beta() const noexcept { return mass_direct + mass_screen; }

  // Band endpoints in mass coordinates: the screening band covers
  // (screen_lower_mass, screen_upper_mass] with screen_upper_mass
  // = 1 - beta + alpha * rho_star.
  double screen_upper_mass() const noexcept {
    return 1.0 - beta() + mass_screen * rho_star;
  }
  double screen_lower_mass() const noexcept {
    return screen_upper_mass() - mass_screen;
  }
};

// Threshold above which the allocation budget alone serves: F^{-1}(1 - beta).
double no_screening_threshold(const RiskDistribution& d, const Budgets& b);

// Exact uniform solution:
//   q_beta = (1 - beta - alpha^2/2) / (1 - alpha),  q_alpha = q_beta - alpha.
ScreeningPolicy uniform_closed_form(const Budgets& b);

// Degenerate alpha = 0 policy shared by all solvers: both thresholds collapse
// onto the no-screening threshold.
ScreeningPolicy no_screening_policy(const RiskDistribution& d, const Budgets& b,
                                    SolverKind solver);

// Residuals of the two budget identities a solved policy must satisfy:
//   screening:  F(q_beta) - F(q_alpha) - alpha
//   allocation: E[mu; q_alpha < mu <= q_beta] + 1 - F(q_beta) - beta
struct ConstraintResiduals {
  double screening;
  double allocation;
};
ConstraintResiduals constraint_residuals(const RiskDistribution& d, const ScreeningPolicy& p);

// Flat JSON document with exactly the ScreeningPolicy fields (plus whatever
// run metadata the caller merges in at the CLI layer).
std::string policy_to_json(const ScreeningPolicy& p);
ScreeningPolicy policy_from_json(const std::string& json_text);

}  // namespace screenopt
