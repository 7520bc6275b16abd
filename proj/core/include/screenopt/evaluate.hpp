#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "screenopt/io.hpp"
#include "screenopt/simulation.hpp"
#include "screenopt/value.hpp"

namespace screenopt {

struct EvaluateOptions {
  double beta = 0.0;
  std::vector<double> alpha_grid;
  std::uint64_t seed = kDefaultSeed;
  int random_reps = 10;  // replications of the random-screening baseline
  int threads = 1;
};

struct EvaluateResult {
  ValueCurve curve;          // solved on the empirical score distribution
  ExperimentReport report;   // realized precision against provided labels
};

// Calibration protocol for externally supplied scores: builds an Empirical
// distribution from the score file, solves the optimal policy per alpha,
// evaluates realized precision against the labels (screened units reveal
// their label), and adds a random-screening baseline. Scores and labels are
// matched by id; the id sets must coincide exactly.
EvaluateResult evaluate_external(const ScoreFile& scores, const LabelFile& labels,
                                 const EvaluateOptions& opts);

// File-path convenience wrapper.
EvaluateResult evaluate_external(const std::string& scores_path,
                                 const std::string& outcomes_path,
                                 const EvaluateOptions& opts);

}  // namespace screenopt
