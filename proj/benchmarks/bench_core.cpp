#include <benchmark/benchmark.h>

#include "tchm/darkstates.hpp"
#include "tchm/dynamics.hpp"
#include "tchm/scenarios.hpp"

using namespace tchm;

static void BM_BuildOpticalModel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(scenario_optical_interpretation());
}
BENCHMARK(BM_BuildOpticalModel)->Unit(benchmark::kMillisecond);

static void BM_DarkKernelExact(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  SparseOperator s = collective_lowering(atom_register(n, 2), {});
  for (auto _ : state) benchmark::DoNotOptimize(dark_basis_exact(s).dimension());
}
BENCHMARK(BM_DarkKernelExact)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_Rk4StepLambda(benchmark::State& state) {
  Model m = scenario_lambda();
  LindbladGenerator L(m.H, m.channels);
  const double dt = stability_limit(m.H, m.channels);
  Eigen::MatrixXcd rho = m.rho0;
  for (auto _ : state) {
    rho = rk4_step(L, rho, dt);
    benchmark::DoNotOptimize(rho.data());
  }
  state.counters["D"] = static_cast<double>(m.space.dimension());
}
BENCHMARK(BM_Rk4StepLambda)->Unit(benchmark::kMicrosecond);

static void BM_BlockStepLambda(benchmark::State& state) {
  Model m = scenario_lambda();
  auto blocked = BlockLindblad::build(m.H, m.channels, m.rho0);
  if (!blocked) {
    state.SkipWithError("lambda model has no block structure");
    return;
  }
  const double dt = stability_limit(m.H, m.channels);
  for (auto _ : state) blocked->step(dt);
  state.counters["blocks"] = static_cast<double>(blocked->blocks());
}
BENCHMARK(BM_BlockStepLambda)->Unit(benchmark::kMicrosecond);

static void BM_AssocRun(benchmark::State& state) {
  ScenarioConfig c;
  c.id = "assoc";
  c.t_max = 5.0;
  c.samples = 10;
  for (auto _ : state) benchmark::DoNotOptimize(run_scenario(c).rows.size());
}
BENCHMARK(BM_AssocRun)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
