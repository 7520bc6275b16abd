#include "screenopt/solver.hpp"

#include <cmath>
#include <vector>

#include <doctest.h>

#include "screenopt/budgets.hpp"
#include "screenopt/distribution.hpp"
#include "screenopt/errors.hpp"
#include "test_support.hpp"

using screenopt::BracketError;
using screenopt::Budgets;
using screenopt::ConvergenceError;
using screenopt::RegimeError;
using screenopt::RiskDistribution;
using screenopt::ScreeningPolicy;
using screenopt::SolverKind;
using screenopt::UnsupportedDistributionError;

namespace {

void check_residuals(const RiskDistribution& d, const ScreeningPolicy& p, double tol) {
  const auto r = screenopt::constraint_residuals(d, p);
  CHECK(std::fabs(r.screening) < tol);
  CHECK(std::fabs(r.allocation) < tol);
}

}  // namespace

TEST_CASE("fixed point on uniform reproduces the closed form") {
  const auto u = RiskDistribution::uniform01();
  const Budgets b(0.1, 0.35);
  const auto [p, trace] = screenopt::fixed_point_solve(u, b, 1e-12);
  CHECK(p.converged);
  CHECK(p.rho_star == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(p.q_beta == doctest::Approx(43.0 / 60.0).epsilon(1e-10));
  CHECK(p.q_alpha == doctest::Approx(37.0 / 60.0).epsilon(1e-10));
  CHECK(trace.rho_sequence.front() == 0.0);
  CHECK(trace.c_f == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(static_cast<long>(trace.rho_sequence.size()) == p.iterations + 1);

  // The uniform iteration contracts at exactly alpha / (1 - alpha)... the
  // observed per-step error ratio must at least respect the certified c_f.
  const double rho = 2.0 / 3.0;
  for (std::size_t k = 1; k < trace.rho_sequence.size(); ++k) {
    const double prev = std::fabs(trace.rho_sequence[k - 1] - rho);
    const double cur = std::fabs(trace.rho_sequence[k] - rho);
    if (prev > 1e-12) CHECK(cur <= trace.c_f * prev + 1e-12);
  }
}

TEST_CASE("fixed point and root finder agree with the closed form on a grid") {
  const auto u = RiskDistribution::uniform01();
  testsupport::CaseRng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const double beta = rng.uniform(0.1, 0.6);
    const double alpha = rng.uniform(0.01, std::min(beta, 1.0 - beta) - 0.005);
    if (alpha <= 0.0) continue;
    const Budgets b(alpha, beta);
    CAPTURE(alpha);
    CAPTURE(beta);
    const auto cf = screenopt::uniform_closed_form(b);
    const auto [fp, trace] = screenopt::fixed_point_solve(u, b, 1e-12);
    const auto rf = screenopt::root_find_solve(u, b, 1e-12);
    CHECK(std::fabs(fp.q_beta - cf.q_beta) < 1e-9);
    CHECK(std::fabs(fp.q_alpha - cf.q_alpha) < 1e-9);
    CHECK(std::fabs(rf.q_beta - cf.q_beta) < 1e-9);
    CHECK(std::fabs(rf.q_alpha - cf.q_alpha) < 1e-9);
    CHECK(std::fabs(fp.rho_star - cf.rho_star) < 1e-9);
    check_residuals(u, fp, 1e-9);
    check_residuals(u, rf, 1e-9);
  }
}

TEST_CASE("solvers agree on symmetric beta shapes") {
  for (const double t : {0.5, 2.0, 10.0}) {
    const auto d = RiskDistribution::beta_symmetric(t);
    CAPTURE(t);
    for (const auto& [alpha, beta] : std::vector<std::pair<double, double>>{
             {0.05, 0.2}, {0.1, 0.35}, {0.35, 0.35}, {0.2, 0.5}}) {
      CAPTURE(alpha);
      CAPTURE(beta);
      const Budgets b(alpha, beta);
      const auto [fp, trace] = screenopt::fixed_point_solve(d, b, 1e-12);
      const auto rf = screenopt::root_find_solve(d, b, 1e-12);
      CHECK(std::fabs(fp.q_beta - rf.q_beta) < 1e-8);
      CHECK(std::fabs(fp.q_alpha - rf.q_alpha) < 1e-8);
      CHECK(std::fabs(fp.rho_star - rf.rho_star) < 1e-8);
      check_residuals(d, fp, 1e-8);
      check_residuals(d, rf, 1e-8);
      CHECK(fp.q_alpha <= fp.q_tilde_beta + 1e-12);
      CHECK(fp.q_tilde_beta <= fp.q_beta + 1e-12);
    }
  }
}

TEST_CASE("beta t=10 frozen thresholds at alpha=beta=0.35") {
  const auto d = RiskDistribution::beta_symmetric(10.0);
  const auto p = screenopt::root_find_solve(d, Budgets(0.35, 0.35), 1e-12);
  CHECK(p.q_alpha == doctest::Approx(0.49796).epsilon(1e-4));
  CHECK(p.q_beta == doctest::Approx(0.61244).epsilon(1e-4));
  CHECK(p.q_tilde_beta == doctest::Approx(0.54354).epsilon(1e-4));
  CHECK(p.rho_star == doctest::Approx(0.55093).epsilon(1e-4));
}

TEST_CASE("fixed point trace on the four point sample") {
  const auto d = RiskDistribution::empirical({0.1, 0.4, 0.6, 0.9});
  const auto [p, trace] = screenopt::fixed_point_solve(d, Budgets(0.25, 0.5));
  const std::vector<double> want{0.0, 0.4, 0.6, 0.6};
  REQUIRE(trace.rho_sequence.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    CHECK(trace.rho_sequence[i] == doctest::Approx(want[i]));
  }
  CHECK(p.iterations == 3);
  CHECK(p.q_alpha == doctest::Approx(0.4));
  CHECK(p.q_beta == doctest::Approx(0.6));
  CHECK(p.rho_star == doctest::Approx(0.6));
  CHECK(p.converged);
}

TEST_CASE("empirical fixed point lands exactly on large samples") {
  testsupport::CaseRng rng(99);
  std::vector<double> scores;
  for (int i = 0; i < 1000; ++i) scores.push_back(rng.uniform());
  const auto d = RiskDistribution::empirical(scores);
  const auto [p, trace] = screenopt::fixed_point_solve(d, Budgets(0.1, 0.35));
  CHECK(p.converged);
  // Successive band means on a finite sample repeat once the rank window
  // stabilizes, so the last two iterates are equal, not merely close.
  const auto& seq = trace.rho_sequence;
  REQUIRE(seq.size() >= 2);
  CHECK(seq[seq.size() - 1] == seq[seq.size() - 2]);
  // Near-uniform sample lands near the uniform solution.
  CHECK(std::fabs(p.q_beta - 43.0 / 60.0) < 0.05);
}

TEST_CASE("geometric convergence bound inside the guarantee regime") {
  for (const auto& spec : {std::string("uniform"), std::string("beta:t=2")}) {
    const auto d = RiskDistribution::from_spec(spec);
    CAPTURE(spec);
    for (const auto& [alpha, beta] :
         std::vector<std::pair<double, double>>{{0.05, 0.3}, {0.1, 0.35}, {0.2, 0.45}}) {
      CAPTURE(alpha);
      CAPTURE(beta);
      const Budgets b(alpha, beta);
      const double c_f = screenopt::contraction_constant(d, b);
      CHECK(c_f > 0.0);
      CHECK(c_f < 1.0);
      const auto [p, trace] = screenopt::fixed_point_solve(d, b, 1e-12);
      const double rho = p.rho_star;
      const double err0 = std::fabs(trace.rho_sequence.front() - rho);
      for (std::size_t k = 0; k < trace.rho_sequence.size(); ++k) {
        const double bound = std::pow(c_f, static_cast<double>(k)) * err0 + 1e-10;
        CHECK(std::fabs(trace.rho_sequence[k] - rho) <= bound);
      }
    }
  }
}

TEST_CASE("contraction constant values and regime errors") {
  const auto u = RiskDistribution::uniform01();
  CHECK(screenopt::contraction_constant(u, Budgets(0.1, 0.35)) ==
        doctest::Approx(0.2).epsilon(1e-12));
  // Point mass: both quantiles equal c, so the modulus is zero.
  CHECK(screenopt::contraction_constant(RiskDistribution::point_mass(0.5),
                                        Budgets(0.1, 0.35)) == doctest::Approx(0.0));
  // Heavy-tailed beta: wider quantile spread than uniform but still < 1.
  const double c_b = screenopt::contraction_constant(RiskDistribution::beta_symmetric(0.1),
                                                     Budgets(0.1, 0.35));
  CHECK(c_b > 0.2);
  CHECK(c_b < 1.0);

  CHECK_THROWS_AS(screenopt::contraction_constant(u, Budgets(0.0, 0.35)), RegimeError);
  CHECK_THROWS_AS(screenopt::contraction_constant(u, Budgets(0.35, 0.35)), RegimeError);
  CHECK_THROWS_AS(screenopt::contraction_constant(u, Budgets(0.4, 0.7)), RegimeError);
}

TEST_CASE("fixed point gap sequence is monotone under the contraction") {
  const auto d = RiskDistribution::beta_symmetric(2.0);
  const auto [p, trace] = screenopt::fixed_point_solve(d, Budgets(0.1, 0.35), 1e-12);
  for (std::size_t k = 2; k < trace.rho_sequence.size(); ++k) {
    const double prev = std::fabs(trace.rho_sequence[k - 1] - trace.rho_sequence[k - 2]);
    const double cur = std::fabs(trace.rho_sequence[k] - trace.rho_sequence[k - 1]);
    CHECK(cur <= prev + 1e-15);
  }
}

TEST_CASE("band mean map is monotone in rho") {
  // g(rho) = mean of the band at mass [1-b-a+a*rho, 1-b+a*rho] is
  // nondecreasing in rho for every distribution.
  const Budgets b(0.15, 0.4);
  testsupport::CaseRng rng(17);
  std::vector<double> sample;
  for (int i = 0; i < 200; ++i) sample.push_back(rng.uniform());
  const std::vector<RiskDistribution> dists = {
      RiskDistribution::uniform01(), RiskDistribution::beta_symmetric(0.5),
      RiskDistribution::beta_symmetric(5.0), RiskDistribution::empirical(sample)};
  for (const auto& d : dists) {
    CAPTURE(d.spec_string());
    double last = -1.0;
    for (double rho = 0.0; rho <= 1.0 + 1e-12; rho += 0.05) {
      const double hi = std::min(1.0 - b.beta + b.alpha * rho, 1.0);
      const double lo = std::max(hi - b.alpha, 0.0);
      const double g = d.band_mean_mass(lo, hi);
      CHECK(g >= last - 1e-12);
      last = g;
    }
  }
}

TEST_CASE("alpha zero collapses for every solver") {
  const Budgets b(0.0, 0.35);
  const auto u = RiskDistribution::uniform01();
  const auto [fp, trace] = screenopt::fixed_point_solve(u, b);
  CHECK(fp.q_alpha == doctest::Approx(0.65));
  CHECK(fp.q_beta == doctest::Approx(0.65));
  CHECK(fp.iterations == 0);
  CHECK(fp.converged);
  const auto rf = screenopt::root_find_solve(u, b);
  CHECK(rf.q_beta == doctest::Approx(0.65));
  const auto pm = RiskDistribution::point_mass(0.5);
  const auto [fp2, trace2] = screenopt::fixed_point_solve(pm, b);
  CHECK(fp2.q_beta == 0.5);
}

TEST_CASE("convergence error carries the iterate sequence") {
  const auto d = RiskDistribution::beta_symmetric(2.0);
  try {
    screenopt::fixed_point_solve(d, Budgets(0.1, 0.35), 1e-14, 2);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.rho_sequence().size() == 3);  // rho0 plus two iterates
    CHECK(e.rho_sequence().front() == 0.0);
  }
}

TEST_CASE("root finder rejects distributions without a density") {
  const Budgets b(0.1, 0.35);
  CHECK_THROWS_AS(
      screenopt::root_find_solve(RiskDistribution::empirical({0.1, 0.4, 0.6, 0.9}), b),
      UnsupportedDistributionError);
  CHECK_THROWS_AS(screenopt::root_find_solve(RiskDistribution::point_mass(0.5), b),
                  UnsupportedDistributionError);
}

TEST_CASE("solve_policy dispatch") {
  const Budgets b(0.1, 0.35);
  const auto u = RiskDistribution::uniform01();
  const auto beta = RiskDistribution::beta_symmetric(10.0);

  const auto cf = screenopt::solve_policy(u, b, SolverKind::ClosedFormUniform);
  CHECK(cf.solver == SolverKind::ClosedFormUniform);
  CHECK(cf.q_beta == doctest::Approx(43.0 / 60.0));
  // Closed form demands the uniform kind.
  CHECK_THROWS_AS(screenopt::solve_policy(beta, b, SolverKind::ClosedFormUniform),
                  screenopt::DomainError);

  const auto rf = screenopt::solve_policy(beta, b, SolverKind::RootFind);
  CHECK(rf.solver == SolverKind::RootFind);
  const auto fp = screenopt::solve_policy(beta, b, SolverKind::FixedPoint);
  CHECK(fp.solver == SolverKind::FixedPoint);
  CHECK(std::fabs(rf.q_beta - fp.q_beta) < 1e-8);

  // Auto picks a sensible solver per kind and always satisfies the budgets.
  CHECK(screenopt::solve_policy_auto(u, b).solver == SolverKind::ClosedFormUniform);
  CHECK(screenopt::solve_policy_auto(beta, b).solver == SolverKind::RootFind);
  const auto e = RiskDistribution::empirical({0.1, 0.4, 0.6, 0.9});
  CHECK(screenopt::solve_policy_auto(e, Budgets(0.25, 0.5)).solver == SolverKind::FixedPoint);
}
