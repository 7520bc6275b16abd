#include "screenopt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "screenopt/budgets.hpp"
#include "screenopt/distribution.hpp"
#include "screenopt/errors.hpp"
#include "screenopt/solver.hpp"
#include "test_support.hpp"

using screenopt::DomainError;
using screenopt::EnumerationCapError;
using screenopt::OracleInstance;
using screenopt::OracleSolution;
using screenopt::StructureReport;

namespace {

OracleInstance make(std::vector<double> scores, int k, double budget) {
  OracleInstance inst;
  inst.scores = std::move(scores);
  inst.screen_capacity = k;
  inst.alloc_budget = budget;
  return inst;
}

// Best value over contiguous sorted-order windows of width k; per the band
// structure some argmax must be of this form.
double best_contiguous_value(const OracleInstance& inst) {
  const int n = static_cast<int>(inst.scores.size());
  const int k = inst.screen_capacity;
  std::vector<int> asc(inst.scores.size());
  for (int i = 0; i < n; ++i) asc[static_cast<std::size_t>(i)] = i;
  std::stable_sort(asc.begin(), asc.end(), [&](int a, int b) {
    return inst.scores[static_cast<std::size_t>(a)] < inst.scores[static_cast<std::size_t>(b)];
  });
  double best = -1.0;
  for (int lo = 0; lo + k <= n; ++lo) {
    const std::vector<int> window(asc.begin() + lo, asc.begin() + lo + k);
    best = std::max(best, screenopt::screening_set_value(inst, window));
  }
  return best;
}

}  // namespace

TEST_CASE("four point instance frozen solution") {
  const auto inst = make({0.1, 0.4, 0.6, 0.9}, 1, 2.0);
  const OracleSolution sol = screenopt::oracle_solve(inst);
  CHECK(sol.best_value == doctest::Approx(1.66).epsilon(1e-12));
  CHECK(sol.sets_enumerated == 4);
  REQUIRE(sol.best_sets.size() == 2);
  CHECK(sol.best_sets[0] == std::vector<int>{1});
  CHECK(sol.best_sets[1] == std::vector<int>{2});

  const StructureReport rep = screenopt::verify_structure(inst);
  CHECK(rep.pass);
  CHECK(rep.any_contiguous);
  CHECK(rep.any_at_margin);
  CHECK(rep.best_value == doctest::Approx(1.66));
  CHECK(rep.argmax_count == 2);
  CHECK(rep.witness_set == std::vector<int>{1});
}

TEST_CASE("value ladder grows with screening capacity") {
  // Hand-computed optima for k = 0..4 on the four point instance.
  const std::vector<double> want{1.5, 1.66, 1.9, 1.91, 2.0};
  for (int k = 0; k <= 4; ++k) {
    CAPTURE(k);
    const OracleSolution sol = screenopt::oracle_solve(make({0.1, 0.4, 0.6, 0.9}, k, 2.0));
    CHECK(sol.best_value == doctest::Approx(want[static_cast<std::size_t>(k)]).epsilon(1e-9));
    if (k > 0) CHECK(sol.best_value >= want[static_cast<std::size_t>(k - 1)] - 1e-12);
  }
  // k = n with the budget covered exactly: value capped at the budget.
  const OracleSolution all = screenopt::oracle_solve(make({0.1, 0.4, 0.6, 0.9}, 4, 2.0));
  CHECK(all.best_value == doctest::Approx(2.0));
  CHECK(all.sets_enumerated == 1);
}

TEST_CASE("zero capacity evaluates the empty set once") {
  const OracleSolution sol = screenopt::oracle_solve(make({0.1, 0.4, 0.6, 0.9}, 0, 2.0));
  CHECK(sol.sets_enumerated == 1);
  REQUIRE(sol.best_sets.size() == 1);
  CHECK(sol.best_sets[0].empty());
  CHECK(sol.best_value == doctest::Approx(1.5));  // 0.9 + 0.6 fully served
  const StructureReport rep = screenopt::verify_structure(make({0.1, 0.4, 0.6, 0.9}, 0, 2.0));
  CHECK(rep.pass);  // vacuously contiguous and at margin
}

TEST_CASE("unique argmax when the symmetry is broken") {
  const auto inst = make({0.1, 0.5, 0.9}, 1, 1.2);
  const OracleSolution sol = screenopt::oracle_solve(inst);
  CHECK(sol.best_value == doctest::Approx(1.13).epsilon(1e-12));
  REQUIRE(sol.best_sets.size() == 1);
  CHECK(sol.best_sets[0] == std::vector<int>{1});
}

TEST_CASE("all-equal scores tie across every set") {
  const auto inst = make(std::vector<double>(6, 0.5), 2, 2.0);
  const OracleSolution sol = screenopt::oracle_solve(inst);
  CHECK(sol.sets_enumerated == 15);  // C(6,2)
  CHECK(sol.best_sets.size() == 15);
  // Closed form: k*c certainties plus one full unscreened unit at c.
  CHECK(sol.best_value == doctest::Approx(1.5).epsilon(1e-12));
  const StructureReport rep = screenopt::verify_structure(inst);
  CHECK(rep.pass);
  CHECK(rep.argmax_count == 15);
}

TEST_CASE("screening budget covering the allocation budget caps the value") {
  const auto inst = make({0.9, 0.8, 0.7, 0.6}, 3, 1.5);
  const OracleSolution sol = screenopt::oracle_solve(inst);
  CHECK(sol.best_value == doctest::Approx(1.5));  // min(sum, B) binds
}

TEST_CASE("screening_set_value prices arbitrary sets") {
  const auto inst = make({0.1, 0.4, 0.6, 0.9}, 1, 2.0);
  CHECK(screenopt::screening_set_value(inst, std::vector<int>{2}) ==
        doctest::Approx(1.66).epsilon(1e-12));
  CHECK(screenopt::screening_set_value(inst, std::vector<int>{0}) ==
        doctest::Approx(1.54).epsilon(1e-12));
  CHECK(screenopt::screening_set_value(inst, std::vector<int>{}) ==
        doctest::Approx(1.5).epsilon(1e-12));
  CHECK_THROWS_AS(screenopt::screening_set_value(inst, std::vector<int>{4}), DomainError);
  CHECK_THROWS_AS(screenopt::screening_set_value(inst, std::vector<int>{1, 1}), DomainError);
}

TEST_CASE("instance validation and enumeration cap") {
  CHECK_THROWS_AS(screenopt::oracle_solve(make({}, 0, 1.0)), DomainError);
  CHECK_THROWS_AS(screenopt::oracle_solve(make(std::vector<double>(21, 0.5), 1, 1.0)),
                  DomainError);
  CHECK_THROWS_AS(screenopt::oracle_solve(make({0.5, 1.5}, 1, 1.0)), DomainError);
  CHECK_THROWS_AS(screenopt::oracle_solve(make({0.5, 0.5}, 3, 1.0)), DomainError);
  CHECK_THROWS_AS(screenopt::oracle_solve(make({0.5, 0.5}, -1, 1.0)), DomainError);
  CHECK_THROWS_AS(screenopt::oracle_solve(make({0.5, 0.5}, 1, 0.0)), DomainError);
  CHECK_THROWS_AS(screenopt::oracle_solve(make({0.5, 0.5}, 1, 2.0)), DomainError);
  CHECK_THROWS_AS(screenopt::oracle_solve(make(std::vector<double>(6, 0.5), 3, 2.0), 10),
                  EnumerationCapError);
}

TEST_CASE("random campaign: every argmax structure check passes") {
  testsupport::CaseRng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = static_cast<int>(rng.integer(4, 12));
    const int k = static_cast<int>(rng.integer(0, 3));
    std::vector<double> scores;
    scores.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) scores.push_back(rng.uniform());
    const double budget = rng.uniform(0.5, static_cast<double>(n) - 0.5);
    const auto inst = make(scores, k, budget);
    CAPTURE(trial);
    CAPTURE(n);
    CAPTURE(k);
    CAPTURE(budget);

    const StructureReport rep = screenopt::verify_structure(inst);
    CHECK(rep.pass);
    // Some contiguous window attains the optimum exactly.
    CHECK(best_contiguous_value(inst) == doctest::Approx(rep.best_value).epsilon(1e-9));
  }
}

TEST_CASE("tie-heavy campaign keeps structure") {
  testsupport::CaseRng rng(77);
  const double levels[3] = {0.2, 0.5, 0.8};
  for (int trial = 0; trial < 100; ++trial) {
    const int n = static_cast<int>(rng.integer(5, 10));
    const int k = static_cast<int>(rng.integer(1, 3));
    std::vector<double> scores;
    for (int i = 0; i < n; ++i) scores.push_back(levels[rng.integer(0, 2)]);
    const double budget = rng.uniform(1.0, static_cast<double>(n) - 1.0);
    CAPTURE(trial);
    const StructureReport rep = screenopt::verify_structure(make(scores, k, budget));
    CHECK(rep.pass);
  }
}

TEST_CASE("fixed-point band prices close to the oracle optimum") {
  testsupport::CaseRng rng(4242);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 12;
    const int k = static_cast<int>(rng.integer(1, 4));
    const int budget_units = static_cast<int>(rng.integer(k + 1, 6));
    std::vector<double> scores;
    for (int i = 0; i < n; ++i) scores.push_back(rng.uniform(0.05, 0.95));
    const auto inst = make(scores, k, static_cast<double>(budget_units));
    CAPTURE(trial);
    CAPTURE(k);
    CAPTURE(budget_units);

    const OracleSolution sol = screenopt::oracle_solve(inst);

    const auto d = screenopt::RiskDistribution::empirical(scores);
    const screenopt::Budgets b(static_cast<double>(k) / n,
                               static_cast<double>(budget_units) / n);
    const auto [policy, trace] = screenopt::fixed_point_solve(d, b);
    // Band = the k sorted ranks ending at the q_beta cut, as unit ids.
    const std::size_t r_hi = d.count_at_or_below(policy.q_beta);
    std::vector<int> band;
    for (std::size_t r = r_hi - static_cast<std::size_t>(k); r < r_hi; ++r) {
      band.push_back(static_cast<int>(d.original_index()[r]));
    }
    const double band_value = screenopt::screening_set_value(inst, band);
    CHECK(band_value >= sol.best_value - 0.12);  // rank rounding slack at n=12
    CHECK(band_value <= sol.best_value + 1e-9);
  }
}
