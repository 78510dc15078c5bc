#include <benchmark/benchmark.h>

#include "refsde/drift.hpp"
#include "refsde/estimate.hpp"
#include "refsde/invariant.hpp"
#include "refsde/montecarlo.hpp"
#include "refsde/rng.hpp"
#include "refsde/simulate.hpp"

using namespace refsde;

namespace {

SimConfig bench_config(std::int64_t n_steps, bool two_sided) {
  SimConfig config;
  config.drift = builtin_drift("sin2pi");
  config.theta = 1.0;
  config.sigma = 2.0;
  config.barriers.lower = 0.0;
  if (two_sided) config.barriers.upper = 3.0;
  config.x0 = 1.5;
  config.dt = 0.01;
  config.n_steps = n_steps;
  config.rng_seed = 1;
  return config;
}

void BM_NormalDraw(benchmark::State& state) {
  RngStream rng(7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rng.normal());
  }
}
BENCHMARK(BM_NormalDraw);

void BM_SimulateTwoSided(benchmark::State& state) {
  const SimConfig config = bench_config(state.range(0), true);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(config));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateTwoSided)->Arg(1000)->Arg(100000);

void BM_SimulateOneSidedLepingle(benchmark::State& state) {
  SimConfig config = bench_config(state.range(0), false);
  config.drift = builtin_drift("sqrt");
  config.theta = -1.0;
  config.scheme = Scheme::lepingle;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(config));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateOneSidedLepingle)->Arg(1000)->Arg(100000);

void BM_Estimate(benchmark::State& state) {
  const SimConfig config = bench_config(state.range(0), true);
  const ReflectedPath path = simulate(config);
  EstimateOptions options;
  options.sigma = 2.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate(path, config.drift, options));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Estimate)->Arg(1000)->Arg(100000);

void BM_InvariantDensity(benchmark::State& state) {
  const DriftSpec drift = builtin_drift("sin2pi");
  const BarrierConfig barriers{0.0, 3.0};
  for (auto _ : state) {
    const InvariantDensity density(drift, 1.0, 2.0, barriers, -1);
    benchmark::DoNotOptimize(information_F(density));
  }
}
BENCHMARK(BM_InvariantDensity);

void BM_RunExperiment(benchmark::State& state) {
  ExperimentConfig config;
  config.drift_name = "sin2pi";
  config.theta0 = 1.0;
  config.sigma = 2.0;
  config.barriers = BarrierConfig{0.0, 3.0};
  config.n_list = {100};
  config.dt = 0.1;
  config.replicates = 100;
  config.base_seed = 3;
  config.kinds = {BarrierKind::two_sided};
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_experiment(config));
  }
}
BENCHMARK(BM_RunExperiment);

}  // namespace

BENCHMARK_MAIN();
