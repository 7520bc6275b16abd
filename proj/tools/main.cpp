// screenopt: optimal screening-band and allocation-threshold computation for
// two-stage resource allocation under budget constraints.
//
// Subcommands: solve, curve, simulate, evaluate, oracle. Every output file
// embeds the format version, the full flag set, and the seed, so any
// artifact can be regenerated from its own header. Exit codes: 0 success,
// 2 validation error, 3 solver non-convergence, 1 anything else.

#include <cstdint>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "screenopt/errors.hpp"
#include "screenopt/evaluate.hpp"
#include "screenopt/io.hpp"
#include "screenopt/oracle.hpp"
#include "screenopt/parallel.hpp"
#include "screenopt/policy.hpp"
#include "screenopt/simulation.hpp"
#include "screenopt/solver.hpp"
#include "screenopt/value.hpp"

#include <json.hpp>

namespace {

using namespace screenopt;

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNoConvergence = 3;

// "start:stop:steps" (inclusive linear grid) or a comma-separated list.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  const auto parse_num = [&text](const std::string& tok) {
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      throw DomainError("malformed grid component '" + tok + "' in '" + text + "'");
    }
  };
  const std::size_t c1 = text.find(':');
  if (c1 != std::string::npos) {
    const std::size_t c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos || text.find(':', c2 + 1) != std::string::npos) {
      throw DomainError("grid spec '" + text + "' must be start:stop:steps");
    }
    const double start = parse_num(text.substr(0, c1));
    const double stop = parse_num(text.substr(c1 + 1, c2 - c1 - 1));
    const double steps_raw = parse_num(text.substr(c2 + 1));
    const long steps = static_cast<long>(steps_raw);
    if (steps < 1 || static_cast<double>(steps) != steps_raw) {
      throw DomainError("grid steps must be a positive integer in '" + text + "'");
    }
    if (steps == 1) {
      grid.push_back(start);
      return grid;
    }
    for (long i = 0; i < steps; ++i) {
      grid.push_back(start + (stop - start) * static_cast<double>(i) /
                                 static_cast<double>(steps - 1));
    }
    return grid;
  }
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) grid.push_back(parse_num(tok));
  }
  if (grid.empty()) throw DomainError("empty grid spec '" + text + "'");
  return grid;
}

// Reconstructs the effective flag set for output headers. The parallelism
// cap is omitted: it cannot change any output (determinism invariant), and
// keeping it would break byte-identity of reruns at different thread counts.
std::string join_args(int argc, char** argv) {
  std::ostringstream os;
  bool first = true;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--threads") {
      ++i;
      continue;
    }
    if (arg.rfind("--threads=", 0) == 0) continue;
    if (!first) os << ' ';
    os << arg;
    first = false;
  }
  return os.str();
}

std::string sibling_path(const std::string& path, const std::string& suffix) {
  const std::size_t dot = path.rfind('.');
  const std::size_t slash = path.rfind('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return path + suffix;
  }
  return path.substr(0, dot) + suffix + path.substr(dot);
}

std::string curve_csv(const ValueCurve& curve) {
  std::ostringstream os;
  os << "# marginal_method=" << to_string(curve.marginal_method) << "\n";
  os << "alpha,q_alpha,q_beta,value,precision,marginal,utility_gap\n";
  for (const CurveRow& row : curve.rows) {
    os << format_double(row.alpha) << ',' << format_double(row.q_alpha) << ','
       << format_double(row.q_beta) << ',' << format_double(row.value) << ','
       << format_double(row.precision) << ',' << format_double(row.marginal) << ','
       << format_double(row.utility_gap) << '\n';
  }
  return os.str();
}

std::string trace_csv(const FixedPointTrace& trace) {
  std::ostringstream os;
  os << "# c_f=" << format_double(trace.c_f) << " tolerance=" << format_double(trace.tolerance)
     << " max_iterations=" << trace.max_iterations << "\n";
  os << "iter,rho,gap\n";
  for (std::size_t i = 0; i < trace.rho_sequence.size(); ++i) {
    const double gap = i == 0 ? 0.0 : trace.rho_sequence[i] - trace.rho_sequence[i - 1];
    os << i << ',' << format_double(trace.rho_sequence[i]) << ','
       << format_double(i == 0 ? 0.0 : std::abs(gap)) << '\n';
  }
  return os.str();
}

struct CommonOut {
  std::string args;
  std::uint64_t seed = kDefaultSeed;
};

void write_csv(const std::string& path, const std::string& tool, const CommonOut& common,
               const std::string& body) {
  write_text_file(path, csv_header_block(tool, common.args, common.seed) + body);
}

int run_solve(const std::string& dist_spec, double alpha, double beta,
              const std::string& solver_name, double tol, long max_iter,
              const std::string& out_path, const std::string& trace_path,
              const CommonOut& common) {
  const RiskDistribution dist = RiskDistribution::from_spec(dist_spec);
  const Budgets budgets(alpha, beta);
  const SolverKind kind = solver_kind_from_string(solver_name);

  ScreeningPolicy policy;
  FixedPointTrace trace;
  bool have_trace = false;
  if (kind == SolverKind::FixedPoint) {
    try {
      auto solved = fixed_point_solve(dist, budgets, tol, max_iter);
      policy = solved.first;
      trace = std::move(solved.second);
      have_trace = true;
    } catch (const ConvergenceError& e) {
      if (!trace_path.empty()) {
        FixedPointTrace failed;
        failed.rho_sequence = e.rho_sequence();
        failed.tolerance = tol;
        failed.max_iterations = max_iter;
        write_csv(trace_path, "solve", common, trace_csv(failed));
      }
      throw;
    }
  } else {
    policy = solve_policy(dist, budgets, kind, tol, max_iter);
  }

  nlohmann::ordered_json doc = nlohmann::ordered_json::parse(policy_to_json(policy));
  doc["format_version"] = kFormatVersion;
  doc["args"] = common.args;
  doc["seed"] = common.seed;
  write_text_file(out_path, doc.dump(2) + "\n");

  if (!trace_path.empty() && have_trace) {
    write_csv(trace_path, "solve", common, trace_csv(trace));
  }

  std::cout << "q_alpha=" << format_double(policy.q_alpha)
            << " q_beta=" << format_double(policy.q_beta)
            << " q_tilde_beta=" << format_double(policy.q_tilde_beta)
            << " rho_star=" << format_double(policy.rho_star)
            << " iterations=" << policy.iterations << " solver=" << to_string(policy.solver)
            << (policy.in_guaranteed_regime ? "" : " (outside guaranteed regime)") << "\n";
  return kExitOk;
}

int run_curve(const std::string& dist_spec, double beta, const std::string& grid_spec,
              const std::string& out_path, const CommonOut& common) {
  const RiskDistribution dist = RiskDistribution::from_spec(dist_spec);
  const std::vector<double> grid = parse_grid(grid_spec);
  const ValueCurve curve = value_curve(dist, beta, grid);
  write_csv(out_path, "curve", common, curve_csv(curve));
  int failed = 0;
  for (const CurveRow& row : curve.rows) {
    if (row.failed) {
      ++failed;
      std::cerr << "row alpha=" << format_double(row.alpha) << " failed: " << row.error << "\n";
    }
  }
  std::cout << "wrote " << curve.rows.size() << " rows (" << failed << " failed) to "
            << out_path << "\n";
  return kExitOk;
}

std::vector<PolicyKind> parse_kinds(const std::string& baselines) {
  std::vector<PolicyKind> kinds{PolicyKind::OptimalScreening};
  if (baselines.empty() || baselines == "off") return kinds;
  std::stringstream ss(baselines);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    const PolicyKind kind = policy_kind_from_string(tok);
    if (kind != PolicyKind::OptimalScreening) kinds.push_back(kind);
  }
  return kinds;
}

int run_simulate(const std::string& dist_spec, const std::string& t_grid_spec, double beta,
                 const std::string& grid_spec, std::int64_t n, int reps,
                 const std::string& baselines, int threads, const std::string& out_path,
                 const CommonOut& common) {
  if (dist_spec.empty() == t_grid_spec.empty()) {
    throw DomainError("simulate needs exactly one of --dist or --t-grid");
  }
  const std::vector<double> alpha_grid = parse_grid(grid_spec);
  const std::vector<PolicyKind> kinds = parse_kinds(baselines);

  struct Job {
    RiskDistribution dist;
    std::string rows_path;
    std::string agg_path;
  };
  std::vector<Job> jobs;
  if (!dist_spec.empty()) {
    jobs.push_back({RiskDistribution::from_spec(dist_spec), out_path, sibling_path(out_path, ".agg")});
  } else {
    for (const double t : parse_grid(t_grid_spec)) {
      const std::string tag = "_t" + format_double(t);
      jobs.push_back({RiskDistribution::beta_symmetric(t), sibling_path(out_path, tag),
                      sibling_path(out_path, tag + ".agg")});
    }
  }

  for (const Job& job : jobs) {
    const ExperimentReport report = run_experiment(job.dist, beta, alpha_grid, kinds, n, reps,
                                                   common.seed, threads);
    write_csv(job.rows_path, "simulate", common,
              "# dist=" + job.dist.spec_string() + "\n" + report_rows_csv(report));
    write_csv(job.agg_path, "simulate", common,
              "# dist=" + job.dist.spec_string() + "\n" + report_aggregates_csv(report));
    long failed = 0;
    for (const ReportRow& row : report.rows) failed += row.failed ? 1 : 0;
    std::cout << job.dist.spec_string() << ": " << report.rows.size() << " rows (" << failed
              << " failed) -> " << job.rows_path << ", aggregates -> " << job.agg_path << "\n";
  }
  return kExitOk;
}

int run_evaluate(const std::string& scores_path, const std::string& outcomes_path, double beta,
                 const std::string& grid_spec, int reps, int threads,
                 const std::string& out_path, const CommonOut& common) {
  EvaluateOptions opts;
  opts.beta = beta;
  opts.alpha_grid = parse_grid(grid_spec);
  opts.seed = common.seed;
  opts.random_reps = reps;
  opts.threads = threads;
  const EvaluateResult result = evaluate_external(scores_path, outcomes_path, opts);

  write_csv(out_path, "evaluate", common, report_rows_csv(result.report));
  write_csv(sibling_path(out_path, ".agg"), "evaluate", common,
            report_aggregates_csv(result.report));
  write_csv(sibling_path(out_path, ".curve"), "evaluate", common, curve_csv(result.curve));
  std::cout << "wrote " << result.report.rows.size() << " rows to " << out_path
            << " (+ .agg, .curve siblings)\n";
  return kExitOk;
}

int run_oracle(const std::string& scores_path, int k, double budget, bool verify, long cap,
               const CommonOut& common) {
  (void)common;
  OracleInstance inst;
  inst.scores = read_score_file(scores_path).scores;
  inst.screen_capacity = k;
  inst.alloc_budget = budget;

  const OracleSolution sol = oracle_solve(inst, cap);
  std::cout << "best_value=" << format_double(sol.best_value)
            << " sets_enumerated=" << sol.sets_enumerated
            << " argmax_count=" << sol.best_sets.size() << "\n";
  for (const auto& set : sol.best_sets) {
    std::cout << "argmax:";
    for (const int id : set) std::cout << ' ' << id;
    if (set.empty()) std::cout << " (empty)";
    std::cout << "\n";
  }
  if (verify) {
    const StructureReport report = verify_structure(inst, cap);
    std::cout << "structure: " << (report.pass ? "pass" : "FAIL")
              << " contiguous=" << (report.any_contiguous ? "yes" : "no")
              << " at_margin=" << (report.any_at_margin ? "yes" : "no");
    if (report.pass) {
      std::cout << " witness:";
      for (const int id : report.witness_set) std::cout << ' ' << id;
      if (report.witness_set.empty()) std::cout << " (empty)";
    }
    std::cout << "\n";
    if (!report.pass) return kExitOther;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal screening-band and allocation-threshold computation "
               "for budgeted two-stage allocation"};
  app.require_subcommand(1);

  CommonOut common;
  common.args = join_args(argc, argv);

  std::string dist_spec;
  std::string t_grid_spec;
  std::string grid_spec;
  std::string solver_name = "fixed-point";
  std::string out_path;
  std::string trace_path;
  std::string scores_path;
  std::string outcomes_path;
  std::string baselines = "none,random,heuristic";
  double alpha = 0.0;
  double beta = 0.0;
  double tol = kDefaultSolverTol;
  double oracle_budget = 0.0;
  long max_iter = kDefaultMaxIterations;
  long cap = kDefaultEnumerationCap;
  std::int64_t n = 100000;
  int reps = 10;
  int oracle_k = 0;
  int threads = default_threads();
  bool verify = false;

  CLI::App* solve = app.add_subcommand("solve", "Solve one screening policy");
  solve->add_option("--dist", dist_spec,
                    "uniform | beta:t=<t> | pointmass:c=<c> | scores:<path>")->required();
  solve->add_option("--alpha", alpha, "screening budget")->required();
  solve->add_option("--beta", beta, "allocation budget")->required();
  solve->add_option("--solver", solver_name, "fixed-point | root-find | closed-form");
  solve->add_option("--tol", tol, "solver tolerance");
  solve->add_option("--max-iter", max_iter, "fixed-point iteration cap");
  solve->add_option("--out", out_path, "policy JSON path")->required();
  solve->add_option("--trace", trace_path, "fixed-point trace CSV path");
  solve->add_option("--seed", common.seed, "embedded in outputs");

  CLI::App* curve = app.add_subcommand("curve", "Sweep the screening budget");
  curve->add_option("--dist", dist_spec, "distribution spec")->required();
  curve->add_option("--beta", beta, "allocation budget")->required();
  curve->add_option("--alpha-grid", grid_spec, "start:stop:steps or comma list")->required();
  curve->add_option("--out", out_path, "curve CSV path")->required();
  curve->add_option("--seed", common.seed, "embedded in outputs");

  CLI::App* simulate = app.add_subcommand("simulate", "Monte-Carlo policy evaluation");
  simulate->add_option("--dist", dist_spec, "distribution spec");
  simulate->add_option("--t-grid", t_grid_spec, "Beta(t,t) shape grid (one output per t)");
  simulate->add_option("--beta", beta, "allocation budget")->required();
  simulate->add_option("--alpha-grid", grid_spec, "start:stop:steps or comma list")->required();
  simulate->add_option("--n", n, "population size");
  simulate->add_option("--reps", reps, "replications");
  simulate->add_option("--seed", common.seed, "master seed");
  simulate->add_option("--baselines", baselines, "comma list of none,random,heuristic (or off)");
  simulate->add_option("--threads", threads, "parallelism cap");
  simulate->add_option("--out", out_path, "rows CSV path (aggregate CSV written alongside)")
      ->required();

  CLI::App* evaluate = app.add_subcommand("evaluate", "Evaluate external score files");
  evaluate->add_option("--scores", scores_path, "CSV with header id,score")->required();
  evaluate->add_option("--outcomes", outcomes_path, "CSV with header id,label")->required();
  evaluate->add_option("--beta", beta, "allocation budget")->required();
  evaluate->add_option("--alpha-grid", grid_spec, "start:stop:steps or comma list")->required();
  evaluate->add_option("--reps", reps, "random-baseline replications");
  evaluate->add_option("--seed", common.seed, "baseline seed");
  evaluate->add_option("--threads", threads, "parallelism cap");
  evaluate->add_option("--out", out_path, "rows CSV path (.agg/.curve written alongside)")
      ->required();

  CLI::App* oracle = app.add_subcommand("oracle", "Brute-force small instances");
  oracle->add_option("--scores", scores_path, "CSV with header id,score (n <= 20)")->required();
  oracle->add_option("--k", oracle_k, "screening capacity")->required();
  oracle->add_option("--budget", oracle_budget, "allocation budget in units")->required();
  oracle->add_flag("--verify", verify, "also run the structure check");
  oracle->add_option("--cap", cap, "enumeration cap");
  oracle->add_option("--seed", common.seed, "embedded in outputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (solve->parsed()) {
      return run_solve(dist_spec, alpha, beta, solver_name, tol, max_iter, out_path,
                       trace_path, common);
    }
    if (curve->parsed()) return run_curve(dist_spec, beta, grid_spec, out_path, common);
    if (simulate->parsed()) {
      return run_simulate(dist_spec, t_grid_spec, beta, grid_spec, n, reps, baselines, threads,
                          out_path, common);
    }
    if (evaluate->parsed()) {
      return run_evaluate(scores_path, outcomes_path, beta, grid_spec, reps, threads, out_path,
                         common);
    }
    if (oracle->parsed()) {
      return run_oracle(scores_path, oracle_k, oracle_budget, verify, cap, common);
    }
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
  return kExitOther;
}
