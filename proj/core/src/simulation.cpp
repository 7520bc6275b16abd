#include "screenopt/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "screenopt/errors.hpp"
#include "screenopt/io.hpp"
#include "screenopt/parallel.hpp"
#include "screenopt/rng.hpp"
#include "screenopt/solver.hpp"

namespace screenopt {
namespace {

constexpr std::uint64_t kCellTag = 0x63656c6c;
constexpr std::uint64_t kPopTag = 0x706f7075;

// Marks the band of `width` ranks ending at `rank_hi` (ascending-rank
// half-open interval (rank_hi - width, rank_hi]) in an id-indexed mask.
std::vector<std::uint8_t> band_mask(const Population& pop, std::size_t rank_hi,
                                    std::size_t width) {
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(pop.n()), 0);
  const auto& ids = pop.empirical().original_index();
  const std::size_t lo = rank_hi > width ? rank_hi - width : 0;
  for (std::size_t r = lo; r < rank_hi; ++r) mask[ids[r]] = 1;
  return mask;
}

ReportRow failed_row(PolicyKind kind, double alpha, const std::string& error) {
  ReportRow row;
  row.kind = kind;
  row.alpha = alpha;
  row.failed = true;
  row.error = error;
  row.precision = std::numeric_limits<double>::quiet_NaN();
  return row;
}

}  // namespace

long budget_units(double fraction, std::int64_t n) {
  return static_cast<long>(std::floor(fraction * static_cast<double>(n) + 1e-9));
}

const char* to_string(PolicyKind kind) noexcept {
  switch (kind) {
    case PolicyKind::OptimalScreening:
      return "optimal";
    case PolicyKind::NoScreening:
      return "none";
    case PolicyKind::RandomScreening:
      return "random";
    case PolicyKind::HeuristicTopAdjacent:
      return "heuristic";
  }
  return "none";
}

PolicyKind policy_kind_from_string(const std::string& name) {
  if (name == "optimal") return PolicyKind::OptimalScreening;
  if (name == "none") return PolicyKind::NoScreening;
  if (name == "random") return PolicyKind::RandomScreening;
  if (name == "heuristic") return PolicyKind::HeuristicTopAdjacent;
  throw DomainError("unknown policy kind '" + name +
                    "' (expected optimal | none | random | heuristic)");
}

AllocationResult evaluate_allocation(const Population& pop,
                                     const std::vector<std::uint8_t>& screened_by_id,
                                     long budget, AllocationPriority priority) {
  if (screened_by_id.size() != static_cast<std::size_t>(pop.n())) {
    throw DomainError("screened mask size does not match population");
  }
  AllocationResult res;
  res.screened = static_cast<long>(
      std::count(screened_by_id.begin(), screened_by_id.end(), std::uint8_t{1}));
  const auto& order = pop.descending_order();
  const auto& y = pop.y();
  long remaining = budget;

  if (priority == AllocationPriority::ScreenedPositivesFirst) {
    for (const std::uint32_t id : order) {
      if (remaining == 0) break;
      if (screened_by_id[id] && y[id]) {
        ++res.allocated;
        ++res.tp;
        --remaining;
      }
    }
    for (const std::uint32_t id : order) {
      if (remaining == 0) break;
      if (!screened_by_id[id]) {
        ++res.allocated;
        res.tp += y[id];
        --remaining;
      }
    }
  } else {
    for (const std::uint32_t id : order) {
      if (remaining == 0) break;
      if (screened_by_id[id]) {
        if (y[id]) {
          ++res.allocated;
          ++res.tp;
          --remaining;
        }
      } else {
        ++res.allocated;
        res.tp += y[id];
        --remaining;
      }
    }
  }
  res.precision = budget > 0 ? static_cast<double>(res.tp) / static_cast<double>(budget) : 0.0;
  return res;
}

AllocationResult evaluate_two_stage(const ScreeningPolicy& p, const Population& pop) {
  const std::int64_t n = pop.n();
  const long k_budget = budget_units(p.beta(), n);
  const long k_screen = budget_units(p.alpha(), n);
  const std::size_t rank_hi = pop.empirical().count_at_or_below(p.q_beta);
  const auto mask = band_mask(pop, rank_hi, static_cast<std::size_t>(k_screen));
  return evaluate_allocation(pop, mask, k_budget, AllocationPriority::ScreenedPositivesFirst);
}

ReportRow run_policy(const Population& pop, const Budgets& b, PolicyKind kind,
                     std::uint64_t seed) {
  const std::int64_t n = pop.n();
  const long k_budget = budget_units(b.beta, n);
  const long k_screen = budget_units(b.alpha, n);

  AllocationResult res;
  switch (kind) {
    case PolicyKind::OptimalScreening: {
      const ScreeningPolicy p =
          k_screen == 0 || b.alpha == 0.0
              ? no_screening_policy(pop.empirical(), b, SolverKind::FixedPoint)
              : fixed_point_solve(pop.empirical(), b).first;
      res = evaluate_two_stage(p, pop);
      break;
    }
    case PolicyKind::NoScreening: {
      const std::vector<std::uint8_t> mask(static_cast<std::size_t>(n), 0);
      res = evaluate_allocation(pop, mask, k_budget,
                                AllocationPriority::ScreenedPositivesFirst);
      break;
    }
    case PolicyKind::HeuristicTopAdjacent: {
      const double q_tilde = no_screening_threshold(pop.empirical(), b);
      const std::size_t rank_hi = pop.empirical().count_at_or_below(q_tilde);
      const auto mask = band_mask(pop, rank_hi, static_cast<std::size_t>(k_screen));
      res = evaluate_allocation(pop, mask, k_budget,
                                AllocationPriority::ScreenedPositivesFirst);
      break;
    }
    case PolicyKind::RandomScreening: {
      std::vector<std::uint32_t> ids(static_cast<std::size_t>(n));
      std::iota(ids.begin(), ids.end(), 0u);
      RandomStream rs(seed);
      std::vector<std::uint8_t> mask(static_cast<std::size_t>(n), 0);
      for (long i = 0; i < k_screen; ++i) {
        const std::uint64_t j =
            static_cast<std::uint64_t>(i) + rs.next_below(static_cast<std::uint64_t>(n - i));
        std::swap(ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(j)]);
        mask[ids[static_cast<std::size_t>(i)]] = 1;
      }
      res = evaluate_allocation(pop, mask, k_budget, AllocationPriority::ScoreOrder);
      break;
    }
  }

  ReportRow row;
  row.kind = kind;
  row.alpha = b.alpha;
  row.precision = res.precision;
  row.allocated = res.allocated;
  row.screened = res.screened;
  row.tp = res.tp;
  return row;
}

ExperimentReport run_experiment(const RiskDistribution& dist, double beta,
                                std::span<const double> alpha_grid,
                                std::span<const PolicyKind> kinds, std::int64_t n, int reps,
                                std::uint64_t master_seed, int threads) {
  if (reps < 1) throw DomainError("run_experiment needs reps >= 1");
  if (n < 1) throw DomainError("run_experiment needs n >= 1");
  if (alpha_grid.empty()) throw DomainError("run_experiment alpha grid is empty");
  if (kinds.empty()) throw DomainError("run_experiment kinds list is empty");
  for (const double alpha : alpha_grid) {
    (void)Budgets(alpha, beta);  // validates the pair up front
  }

  const std::size_t n_kinds = kinds.size();
  const std::size_t n_alphas = alpha_grid.size();
  const std::size_t cells_per_rep = n_kinds * n_alphas;

  ExperimentReport report;
  report.rows.resize(cells_per_rep * static_cast<std::size_t>(reps));

  // Row slot for (kind index, alpha index, rep): kind-major so the output
  // groups each policy's sweep together.
  const auto slot = [&](std::size_t ki, std::size_t ai, int rep) {
    return (ki * n_alphas + ai) * static_cast<std::size_t>(reps) +
           static_cast<std::size_t>(rep);
  };

  parallel_for(0, reps, threads, [&](std::int64_t rep) {
    const Population pop =
        Population::sample(dist, n, derive_seed(master_seed, kPopTag, static_cast<std::uint64_t>(rep)));
    for (std::size_t ki = 0; ki < n_kinds; ++ki) {
      for (std::size_t ai = 0; ai < n_alphas; ++ai) {
        const std::uint64_t cell_seed = derive_seed(
            master_seed, kCellTag,
            (static_cast<std::uint64_t>(rep) * n_kinds + ki) * n_alphas + ai);
        ReportRow row;
        try {
          row = run_policy(pop, Budgets(alpha_grid[ai], beta), kinds[ki], cell_seed);
        } catch (const std::exception& e) {
          row = failed_row(kinds[ki], alpha_grid[ai], e.what());
        }
        row.rep = static_cast<int>(rep);
        report.rows[slot(ki, ai, static_cast<int>(rep))] = std::move(row);
      }
    }
  });

  report.aggregates.reserve(cells_per_rep);
  for (std::size_t ki = 0; ki < n_kinds; ++ki) {
    for (std::size_t ai = 0; ai < n_alphas; ++ai) {
      AggregateRow agg;
      agg.kind = kinds[ki];
      agg.alpha = alpha_grid[ai];
      double sum = 0.0;
      int count = 0;
      for (int rep = 0; rep < reps; ++rep) {
        const ReportRow& row = report.rows[slot(ki, ai, rep)];
        if (row.failed) continue;
        sum += row.precision;
        ++count;
      }
      agg.reps = count;
      if (count == 0) {
        agg.mean = agg.stddev = std::numeric_limits<double>::quiet_NaN();
      } else {
        agg.mean = sum / count;
        double ss = 0.0;
        for (int rep = 0; rep < reps; ++rep) {
          const ReportRow& row = report.rows[slot(ki, ai, rep)];
          if (row.failed) continue;
          const double d = row.precision - agg.mean;
          ss += d * d;
        }
        agg.stddev = count > 1 ? std::sqrt(ss / (count - 1)) : 0.0;
      }
      report.aggregates.push_back(agg);
    }
  }
  return report;
}

std::string report_rows_csv(const ExperimentReport& report) {
  std::ostringstream os;
  os << "kind,alpha,rep,precision,allocated,screened,tp\n";
  for (const ReportRow& row : report.rows) {
    os << to_string(row.kind) << ',' << format_double(row.alpha) << ',' << row.rep << ','
       << format_double(row.precision) << ',' << row.allocated << ',' << row.screened << ','
       << row.tp << '\n';
  }
  return os.str();
}

std::string report_aggregates_csv(const ExperimentReport& report) {
  std::ostringstream os;
  os << "kind,alpha,mean,std\n";
  for (const AggregateRow& agg : report.aggregates) {
    os << to_string(agg.kind) << ',' << format_double(agg.alpha) << ','
       << format_double(agg.mean) << ',' << format_double(agg.stddev) << '\n';
  }
  return os.str();
}

}  // namespace screenopt
