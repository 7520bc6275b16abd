#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "screenopt/budgets.hpp"
#include "screenopt/policy.hpp"
#include "screenopt/population.hpp"

namespace screenopt {

// Outcome of applying a two-stage policy to a finite population with
// realized labels. precision = tp / floor(beta*n) (the full budget, whether
// or not it was exhausted).
struct AllocationResult {
  long allocated = 0;
  long tp = 0;
  long screened = 0;
  double precision = 0.0;
};

// Whether revealed positives jump the allocation queue. Band policies serve
// screened positives first (they are certainties); the random-screening
// baseline keeps score order and merely skips revealed negatives, so a
// low-scored revealed positive cannot displace high-scored unscreened units.
enum class AllocationPriority { ScreenedPositivesFirst, ScoreOrder };

// Applies a policy to realized outcomes. Units with mu > q_beta are served
// directly; units in the screened band (the floor(alpha*n) ranks at and
// below the q_beta cut) are served iff their label is 1; budget left over
// flows to the highest-scored unscreened units below the band. Allocation is
// capped at floor(beta*n) whole units, screened positives first.
AllocationResult evaluate_two_stage(const ScreeningPolicy& p, const Population& pop);

// Low-level evaluator over an explicit screened unit set (mask by unit id).
AllocationResult evaluate_allocation(const Population& pop,
                                     const std::vector<std::uint8_t>& screened_by_id,
                                     long budget_units, AllocationPriority priority);

enum class PolicyKind { OptimalScreening, NoScreening, RandomScreening, HeuristicTopAdjacent };

const char* to_string(PolicyKind kind) noexcept;
PolicyKind policy_kind_from_string(const std::string& name);

struct ReportRow {
  PolicyKind kind = PolicyKind::NoScreening;
  double alpha = 0.0;
  int rep = 0;
  double precision = 0.0;
  long allocated = 0;
  long screened = 0;
  long tp = 0;
  bool failed = false;
  std::string error;
};

struct AggregateRow {
  PolicyKind kind = PolicyKind::NoScreening;
  double alpha = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
  int reps = 0;
};

struct ExperimentReport {
  std::vector<ReportRow> rows;            // ordered by (kind, alpha, rep)
  std::vector<AggregateRow> aggregates;   // ordered by (kind, alpha)
};

// Evaluates one policy kind on one population. The seed feeds the random
// baseline's draw; deterministic kinds ignore it.
ReportRow run_policy(const Population& pop, const Budgets& b, PolicyKind kind,
                     std::uint64_t seed);

// Monte-Carlo sweep: `reps` fresh populations (seeds derived from
// master_seed), each evaluated at every (kind, alpha) cell. Populations are
// shared across cells within a replication (paired design). A failing cell
// is recorded as a failed row; the sweep continues. Results are identical
// for any thread count.
ExperimentReport run_experiment(const RiskDistribution& dist, double beta,
                                std::span<const double> alpha_grid,
                                std::span<const PolicyKind> kinds, std::int64_t n, int reps,
                                std::uint64_t master_seed, int threads = 1);

// Data-only CSV renderings (column header + rows, no comment block).
std::string report_rows_csv(const ExperimentReport& report);
std::string report_aggregates_csv(const ExperimentReport& report);

// floor(x * n) with a nudge so exact-decimal products do not floor short.
long budget_units(double fraction, std::int64_t n);

}  // namespace screenopt
