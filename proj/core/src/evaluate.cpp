#include "screenopt/evaluate.hpp"

#include <cmath>
#include <limits>
#include <unordered_map>

#include "screenopt/errors.hpp"
#include "screenopt/parallel.hpp"
#include "screenopt/rng.hpp"

namespace screenopt {
namespace {

constexpr std::uint64_t kEvalTag = 0x6576616c;

std::vector<std::uint8_t> match_labels(const ScoreFile& scores, const LabelFile& labels) {
  if (scores.ids.size() != labels.ids.size()) {
    throw DomainError("score and outcome files carry different unit counts (" +
                      std::to_string(scores.ids.size()) + " vs " +
                      std::to_string(labels.ids.size()) + ")");
  }
  std::unordered_map<std::string, int> by_id;
  by_id.reserve(labels.ids.size());
  for (std::size_t i = 0; i < labels.ids.size(); ++i) {
    if (!by_id.emplace(labels.ids[i], labels.labels[i]).second) {
      throw DomainError("duplicate id '" + labels.ids[i] + "' in outcomes file");
    }
  }
  std::vector<std::uint8_t> y;
  y.reserve(scores.ids.size());
  std::unordered_map<std::string, int> seen;
  seen.reserve(scores.ids.size());
  for (const std::string& id : scores.ids) {
    if (!seen.emplace(id, 0).second) {
      throw DomainError("duplicate id '" + id + "' in scores file");
    }
    const auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw DomainError("id '" + id + "' present in scores but missing from outcomes");
    }
    y.push_back(static_cast<std::uint8_t>(it->second));
  }
  return y;
}

}  // namespace

EvaluateResult evaluate_external(const ScoreFile& scores, const LabelFile& labels,
                                 const EvaluateOptions& opts) {
  if (!(opts.beta > 0.0 && opts.beta < 1.0)) {
    throw DomainError("evaluate beta must lie in (0,1)");
  }
  if (opts.alpha_grid.empty()) throw DomainError("evaluate alpha grid is empty");
  if (opts.random_reps < 1) throw DomainError("evaluate needs random_reps >= 1");

  std::vector<std::uint8_t> y = match_labels(scores, labels);
  const Population pop = Population::from_loaded(scores.scores, std::move(y), "loaded");

  EvaluateResult result;
  result.curve = value_curve(pop.empirical(), opts.beta, opts.alpha_grid);

  const std::size_t n_alphas = opts.alpha_grid.size();
  const std::size_t optimal_rows = n_alphas;
  const std::size_t random_rows = n_alphas * static_cast<std::size_t>(opts.random_reps);
  result.report.rows.resize(optimal_rows + random_rows);

  // Cells: [0, n_alphas) optimal, then (alpha, rep) random pairs.
  parallel_for(0, static_cast<std::int64_t>(optimal_rows + random_rows), opts.threads,
               [&](std::int64_t cell) {
                 ReportRow row;
                 try {
                   if (cell < static_cast<std::int64_t>(optimal_rows)) {
                     const double alpha = opts.alpha_grid[static_cast<std::size_t>(cell)];
                     row = run_policy(pop, Budgets(alpha, opts.beta),
                                      PolicyKind::OptimalScreening, 0);
                     row.rep = 0;
                   } else {
                     const std::size_t r = static_cast<std::size_t>(cell) - optimal_rows;
                     const std::size_t ai = r / static_cast<std::size_t>(opts.random_reps);
                     const int rep = static_cast<int>(r % static_cast<std::size_t>(opts.random_reps));
                     const double alpha = opts.alpha_grid[ai];
                     row = run_policy(pop, Budgets(alpha, opts.beta),
                                      PolicyKind::RandomScreening,
                                      derive_seed(opts.seed, kEvalTag, r));
                     row.rep = rep;
                   }
                 } catch (const std::exception& e) {
                   row.failed = true;
                   row.error = e.what();
                   row.precision = std::numeric_limits<double>::quiet_NaN();
                   row.kind = cell < static_cast<std::int64_t>(optimal_rows)
                                  ? PolicyKind::OptimalScreening
                                  : PolicyKind::RandomScreening;
                 }
                 result.report.rows[static_cast<std::size_t>(cell)] = std::move(row);
               });

  // Aggregates in row order: optimal per alpha (single rep), then random.
  for (std::size_t ai = 0; ai < n_alphas; ++ai) {
    const ReportRow& row = result.report.rows[ai];
    AggregateRow agg;
    agg.kind = PolicyKind::OptimalScreening;
    agg.alpha = opts.alpha_grid[ai];
    agg.reps = row.failed ? 0 : 1;
    agg.mean = row.failed ? std::numeric_limits<double>::quiet_NaN() : row.precision;
    agg.stddev = row.failed ? std::numeric_limits<double>::quiet_NaN() : 0.0;
    result.report.aggregates.push_back(agg);
  }
  for (std::size_t ai = 0; ai < n_alphas; ++ai) {
    AggregateRow agg;
    agg.kind = PolicyKind::RandomScreening;
    agg.alpha = opts.alpha_grid[ai];
    double sum = 0.0;
    int count = 0;
    for (int rep = 0; rep < opts.random_reps; ++rep) {
      const ReportRow& row =
          result.report.rows[optimal_rows + ai * static_cast<std::size_t>(opts.random_reps) +
                             static_cast<std::size_t>(rep)];
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
      for (int rep = 0; rep < opts.random_reps; ++rep) {
        const ReportRow& row =
            result.report.rows[optimal_rows + ai * static_cast<std::size_t>(opts.random_reps) +
                               static_cast<std::size_t>(rep)];
        if (row.failed) continue;
        const double d = row.precision - agg.mean;
        ss += d * d;
      }
      agg.stddev = count > 1 ? std::sqrt(ss / (count - 1)) : 0.0;
    }
    result.report.aggregates.push_back(agg);
  }
  return result;
}

EvaluateResult evaluate_external(const std::string& scores_path,
                                 const std::string& outcomes_path,
                                 const EvaluateOptions& opts) {
  const ScoreFile scores = read_score_file(scores_path);
  const LabelFile labels = read_label_file(outcomes_path);
  EvaluateResult result = evaluate_external(scores, labels, opts);
  return result;
}

}  // namespace screenopt
