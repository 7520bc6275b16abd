#include "screenopt/policy.hpp"

#include <json.hpp>

#include "screenopt/errors.hpp"

namespace screenopt {

const char* to_string(SolverKind kind) noexcept {
  switch (kind) {
    case SolverKind::ClosedFormUniform:
      return "closed-form-uniform";
    case SolverKind::RootFind:
      return "root-find";
    case SolverKind::FixedPoint:
      return "fixed-point";
  }
  return "fixed-point";
}

SolverKind solver_kind_from_string(const std::string& name) {
  if (name == "closed-form-uniform" || name == "closed-form") return SolverKind::ClosedFormUniform;
  if (name == "root-find") return SolverKind::RootFind;
  if (name == "fixed-point") return SolverKind::FixedPoint;
  throw DomainError("unknown solver '" + name +
                    "' (expected closed-form | root-find | fixed-point)");
}

double no_screening_threshold(const RiskDistribution& d, const Budgets& b) {
  return d.quantile(1.0 - b.beta);
}

ScreeningPolicy uniform_closed_form(const Budgets& b) {
  ScreeningPolicy p;
  p.solver = SolverKind::ClosedFormUniform;
  p.q_tilde_beta = 1.0 - b.beta;
  p.in_guaranteed_regime = b.in_strict_regime();
  p.converged = true;
  if (b.alpha == 0.0) {
    p.q_alpha = p.q_beta = p.rho_star = p.q_tilde_beta;
    p.mass_direct = b.beta;
    return p;
  }
  p.q_beta = (1.0 - b.beta - 0.5 * b.alpha * b.alpha) / (1.0 - b.alpha);
  p.q_alpha = p.q_beta - b.alpha;
  p.rho_star = 0.5 * (p.q_alpha + p.q_beta);
  p.mass_direct = b.beta - b.alpha;
  p.mass_residual = b.alpha * (1.0 - p.rho_star);
  p.mass_screen = b.alpha;
  return p;
}

ScreeningPolicy no_screening_policy(const RiskDistribution& d, const Budgets& b,
                                    SolverKind solver) {
  ScreeningPolicy p;
  p.solver = solver;
  p.q_tilde_beta = no_screening_threshold(d, b);
  p.q_alpha = p.q_beta = p.rho_star = p.q_tilde_beta;
  p.mass_direct = b.beta;
  p.mass_residual = 0.0;
  p.mass_screen = 0.0;
  p.iterations = 0;
  p.converged = true;
  p.in_guaranteed_regime = b.in_strict_regime();
  return p;
}

ConstraintResiduals constraint_residuals(const RiskDistribution& d, const ScreeningPolicy& p) {
  ConstraintResiduals r;
  r.screening = d.cdf(p.q_beta) - d.cdf(p.q_alpha) - p.alpha();
  r.allocation = d.partial_expectation(p.q_alpha, p.q_beta) + 1.0 - d.cdf(p.q_beta) - p.beta();
  return r;
}

std::string policy_to_json(const ScreeningPolicy& p) {
  nlohmann::ordered_json j;
  j["q_alpha"] = p.q_alpha;
  j["q_beta"] = p.q_beta;
  j["q_tilde_beta"] = p.q_tilde_beta;
  j["rho_star"] = p.rho_star;
  j["mass_direct"] = p.mass_direct;
  j["mass_residual"] = p.mass_residual;
  j["mass_screen"] = p.mass_screen;
  j["solver"] = to_string(p.solver);
  j["iterations"] = p.iterations;
  j["converged"] = p.converged;
  j["in_guaranteed_regime"] = p.in_guaranteed_regime;
  return j.dump(2) + "\n";
}

ScreeningPolicy policy_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid policy JSON: ") + e.what());
  }
  ScreeningPolicy p;
  try {
    p.q_alpha = j.at("q_alpha").get<double>();
    p.q_beta = j.at("q_beta").get<double>();
    p.q_tilde_beta = j.at("q_tilde_beta").get<double>();
    p.rho_star = j.at("rho_star").get<double>();
    p.mass_direct = j.at("mass_direct").get<double>();
    p.mass_residual = j.at("mass_residual").get<double>();
    p.mass_screen = j.at("mass_screen").get<double>();
    p.solver = solver_kind_from_string(j.at("solver").get<std::string>());
    p.iterations = j.at("iterations").get<int>();
    p.converged = j.at("converged").get<bool>();
    p.in_guaranteed_regime = j.at("in_guaranteed_regime").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("policy JSON missing or mistyped field: ") + e.what());
  }
  return p;
}

}  // namespace screenopt
