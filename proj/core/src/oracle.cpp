#include "screenopt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "screenopt/errors.hpp"

namespace screenopt {
namespace {

// Two set values within this absolute slack count as a tie; instance values
// are bounded by n <= 20, so absolute comparison is safe.
constexpr double kTieEps = 1e-9;

void validate(const OracleInstance& inst) {
  const int n = static_cast<int>(inst.scores.size());
  if (n < 1 || n > 20) throw DomainError("oracle instance needs 1 <= n <= 20 scores");
  for (const double s : inst.scores) {
    if (!(s >= 0.0 && s <= 1.0)) throw DomainError("oracle score outside [0,1]");
  }
  if (inst.screen_capacity < 0 || inst.screen_capacity > n) {
    throw DomainError("oracle screen capacity must lie in [0, n]");
  }
  if (!(inst.alloc_budget > 0.0) || !(inst.alloc_budget < static_cast<double>(n))) {
    throw DomainError("oracle allocation budget must lie in (0, n)");
  }
}

long binomial_or_cap(int n, int k, long cap) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) {
    c *= static_cast<double>(n - k + i) / static_cast<double>(i);
    if (c > 2.0 * static_cast<double>(cap)) return cap + 1;
  }
  return static_cast<long>(std::llround(c));
}

// Units in descending score order, ties by ascending index.
std::vector<int> descending_order(const std::vector<double>& scores) {
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&scores](int a, int b) { return scores[a] > scores[b]; });
  return order;
}

double set_value(const OracleInstance& inst, const std::vector<int>& desc,
                 const std::vector<char>& screened) {
  double sum_screened = 0.0;
  for (std::size_t i = 0; i < screened.size(); ++i) {
    if (screened[i]) sum_screened += inst.scores[i];
  }
  if (sum_screened >= inst.alloc_budget) return inst.alloc_budget;
  double value = sum_screened;
  double remaining = inst.alloc_budget - sum_screened;
  for (const int id : desc) {
    if (screened[static_cast<std::size_t>(id)]) continue;
    const double w = std::min(1.0, remaining);
    value += w * inst.scores[static_cast<std::size_t>(id)];
    remaining -= w;
    if (remaining <= 0.0) break;
  }
  return value;
}

}  // namespace

double screening_set_value(const OracleInstance& inst, std::span<const int> set) {
  validate(inst);
  std::vector<char> screened(inst.scores.size(), 0);
  for (const int id : set) {
    if (id < 0 || id >= static_cast<int>(inst.scores.size())) {
      throw DomainError("screening set index out of range");
    }
    if (screened[static_cast<std::size_t>(id)]) {
      throw DomainError("screening set contains a duplicate index");
    }
    screened[static_cast<std::size_t>(id)] = 1;
  }
  return set_value(inst, descending_order(inst.scores), screened);
}

OracleSolution oracle_solve(const OracleInstance& inst, long cap) {
  validate(inst);
  const int n = static_cast<int>(inst.scores.size());
  const int k = inst.screen_capacity;
  const long total = binomial_or_cap(n, k, cap);
  if (total > cap) {
    std::ostringstream os;
    os << "C(" << n << "," << k << ") exceeds enumeration cap " << cap;
    throw EnumerationCapError(os.str());
  }

  const std::vector<int> desc = descending_order(inst.scores);
  OracleSolution sol;
  sol.best_value = -1.0;

  std::vector<int> comb(static_cast<std::size_t>(k));
  std::iota(comb.begin(), comb.end(), 0);
  std::vector<char> screened(static_cast<std::size_t>(n), 0);

  for (;;) {
    std::fill(screened.begin(), screened.end(), 0);
    for (const int id : comb) screened[static_cast<std::size_t>(id)] = 1;
    const double v = set_value(inst, desc, screened);
    ++sol.sets_enumerated;
    if (v > sol.best_value + kTieEps) {
      sol.best_value = v;
      sol.best_sets.clear();
      sol.best_sets.push_back(comb);
    } else if (v > sol.best_value - kTieEps) {
      sol.best_value = std::max(sol.best_value, v);
      sol.best_sets.push_back(comb);
    }
    // Next k-combination of [0, n) in lexicographic order.
    if (k == 0) break;
    int i = k - 1;
    while (i >= 0 && comb[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++comb[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) {
      comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return sol;
}

StructureReport verify_structure(const OracleInstance& inst, long cap) {
  const OracleSolution sol = oracle_solve(inst, cap);
  const int n = static_cast<int>(inst.scores.size());
  const std::vector<int> desc = descending_order(inst.scores);

  // Ascending rank of each unit in sorted-score order.
  std::vector<int> rank_of(static_cast<std::size_t>(n));
  for (int pos = 0; pos < n; ++pos) {
    rank_of[static_cast<std::size_t>(desc[static_cast<std::size_t>(pos)])] = n - 1 - pos;
  }

  StructureReport report;
  report.best_value = sol.best_value;
  report.argmax_count = static_cast<long>(sol.best_sets.size());

  for (const auto& set : sol.best_sets) {
    bool contiguous = true;
    if (!set.empty()) {
      std::vector<int> ranks;
      ranks.reserve(set.size());
      for (const int id : set) ranks.push_back(rank_of[static_cast<std::size_t>(id)]);
      std::sort(ranks.begin(), ranks.end());
      for (std::size_t i = 1; i < ranks.size(); ++i) {
        if (ranks[i] != ranks[i - 1] + 1) {
          contiguous = false;
          break;
        }
      }
    }

    // Replay the fill to find fully allocated unscreened units.
    std::vector<char> screened(static_cast<std::size_t>(n), 0);
    double sum_screened = 0.0;
    double max_screened = -1.0;
    for (const int id : set) {
      screened[static_cast<std::size_t>(id)] = 1;
      sum_screened += inst.scores[static_cast<std::size_t>(id)];
      max_screened = std::max(max_screened, inst.scores[static_cast<std::size_t>(id)]);
    }
    bool at_margin = true;
    double remaining = std::max(inst.alloc_budget - sum_screened, 0.0);
    for (const int id : desc) {
      if (screened[static_cast<std::size_t>(id)]) continue;
      if (remaining >= 1.0) {
        if (inst.scores[static_cast<std::size_t>(id)] < max_screened - kTieEps) {
          at_margin = false;
          break;
        }
        remaining -= 1.0;
      } else {
        break;  // fractional or zero allocation from here down
      }
    }

    report.any_contiguous = report.any_contiguous || contiguous;
    report.any_at_margin = report.any_at_margin || at_margin;
    if (contiguous && at_margin && !report.pass) {
      report.pass = true;
      report.witness_set = set;
    }
  }
  return report;
}

}  // namespace screenopt
