#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace screenopt {

// Small discrete instance solved exactly in the expectation-form relaxation:
// screening a set S of k units makes their expected positives (sum of scores)
// certainties; the remaining budget B - sum(S) fills unscreened units in
// descending score order, with the marginal unit taken fractionally. This is
// the only place fractional allocation exists.
struct OracleInstance {
  std::vector<double> scores;  // n <= 20 reals in [0,1]
  int screen_capacity = 0;     // k, 0 <= k <= n
  double alloc_budget = 0.0;   // B, 0 < B < n
};

inline constexpr long kDefaultEnumerationCap = 2'000'000;

struct OracleSolution {
  double best_value = 0.0;
  // Every argmax set (ties reported, not broken), indices into scores in
  // ascending order.
  std::vector<std::vector<int>> best_sets;
  long sets_enumerated = 0;
};

// Expected positives served when screening exactly `set`; exposed so callers
// can price arbitrary sets (solver-vs-oracle comparisons).
double screening_set_value(const OracleInstance& inst, std::span<const int> set);

// Enumerates all C(n, k) screening sets. EnumerationCapError if C(n, k)
// exceeds `cap`; DomainError on invariant violations.
OracleSolution oracle_solve(const OracleInstance& inst, long cap = kDefaultEnumerationCap);

// Structural check on the argmax sets: some argmax must be contiguous in
// sorted-score order and sit at the allocation margin (no fully allocated
// unscreened unit scores strictly below any screened unit; the fractional
// marginal unit is exempt). Ties in score make contiguity a statement about
// some, not every, argmax.
struct StructureReport {
  bool pass = false;
  bool any_contiguous = false;
  bool any_at_margin = false;
  std::vector<int> witness_set;  // an argmax satisfying both, when pass
  double best_value = 0.0;
  long argmax_count = 0;
};

StructureReport verify_structure(const OracleInstance& inst,
                                 long cap = kDefaultEnumerationCap);

}  // namespace screenopt
