#include <benchmark/benchmark.h>

#include <vector>

#include "screenopt/budgets.hpp"
#include "screenopt/distribution.hpp"
#include "screenopt/oracle.hpp"
#include "screenopt/population.hpp"
#include "screenopt/rng.hpp"
#include "screenopt/simulation.hpp"
#include "screenopt/solver.hpp"
#include "screenopt/value.hpp"

namespace {

using namespace screenopt;

void BM_FixedPointUniform(benchmark::State& state) {
  const RiskDistribution d = RiskDistribution::uniform01();
  const Budgets b(0.1, 0.35);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fixed_point_solve(d, b).first.q_beta);
  }
}
BENCHMARK(BM_FixedPointUniform);

void BM_FixedPointBeta10(benchmark::State& state) {
  const RiskDistribution d = RiskDistribution::beta_symmetric(10.0);
  const Budgets b(0.1, 0.35);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fixed_point_solve(d, b).first.q_beta);
  }
}
BENCHMARK(BM_FixedPointBeta10);

void BM_RootFindBeta10(benchmark::State& state) {
  const RiskDistribution d = RiskDistribution::beta_symmetric(10.0);
  const Budgets b(0.1, 0.35);
  for (auto _ : state) {
    benchmark::DoNotOptimize(root_find_solve(d, b).q_beta);
  }
}
BENCHMARK(BM_RootFindBeta10);

void BM_FixedPointEmpirical(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  std::vector<double> scores(static_cast<std::size_t>(n));
  RandomStream rs(7);
  for (double& s : scores) s = rs.next_uniform();
  const RiskDistribution d = RiskDistribution::empirical(std::move(scores));
  const Budgets b(0.1, 0.35);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fixed_point_solve(d, b).first.q_beta);
  }
}
BENCHMARK(BM_FixedPointEmpirical)->Arg(10000)->Arg(100000);

void BM_SamplePopulationBeta(benchmark::State& state) {
  const RiskDistribution d = RiskDistribution::beta_symmetric(10.0);
  const std::int64_t n = state.range(0);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Population::sample(d, n, seed++).n());
  }
}
BENCHMARK(BM_SamplePopulationBeta)->Arg(100000);

void BM_RunPolicyOptimal(benchmark::State& state) {
  const RiskDistribution d = RiskDistribution::uniform01();
  const Population pop = Population::sample(d, 100000, 11);
  const Budgets b(0.35, 0.35);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_policy(pop, b, PolicyKind::OptimalScreening, 3).precision);
  }
}
BENCHMARK(BM_RunPolicyOptimal);

void BM_ValueCurveBeta10(benchmark::State& state) {
  const RiskDistribution d = RiskDistribution::beta_symmetric(10.0);
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(0.35 * i / 20.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(value_curve(d, 0.35, grid).rows.size());
  }
}
BENCHMARK(BM_ValueCurveBeta10);

void BM_OracleEnumerate(benchmark::State& state) {
  OracleInstance inst;
  RandomStream rs(13);
  for (int i = 0; i < 16; ++i) inst.scores.push_back(rs.next_uniform());
  inst.screen_capacity = 8;
  inst.alloc_budget = 6.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle_solve(inst).best_value);
  }
}
BENCHMARK(BM_OracleEnumerate);

}  // namespace

BENCHMARK_MAIN();
