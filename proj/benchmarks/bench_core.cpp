#include <benchmark/benchmark.h>

#include "scole/beam_fem.hpp"
#include "scole/models.hpp"
#include "scole/passive.hpp"
#include "scole/spectral.hpp"
#include "scole/timesim.hpp"

namespace {

using namespace scole;

ModelSpec spec(int n_elements) {
  ModelSpec s;
  s.n_elements = n_elements;
  return s;
}

void BM_BeamAssembly(benchmark::State& state) {
  const BeamParameters p = BeamParameters::uniform();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_beam_matrices(p, n));
  state.SetComplexityN(n);
}
BENCHMARK(BM_BeamAssembly)->RangeMultiplier(2)->Range(8, 128)->Complexity();

void BM_ModelAssembly(benchmark::State& state) {
  const ModelSpec s = spec(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_model(s));
}
BENCHMARK(BM_ModelAssembly)->Arg(16)->Arg(64);

void BM_ResolventNorm(benchmark::State& state) {
  const ResolventEvaluator eval(assemble_model(spec(static_cast<int>(state.range(0)))));
  double s = 10.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval.norm(s));
    s += 1e-3;
  }
}
BENCHMARK(BM_ResolventNorm)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

// Per-step cost of the midpoint rule; the one-off factorization is amortized
// over 1000 steps.
void BM_SimulationSteps(benchmark::State& state) {
  const DiscreteGenerator g = assemble_model(spec(static_cast<int>(state.range(0))));
  const Vector z0 = classical_initial_data(g, InitialProfile::smooth_modal, 12);
  for (auto _ : state) benchmark::DoNotOptimize(simulate(g, z0, 1.0, 1e-3, 1000));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_SimulationSteps)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_TransferFunction(benchmark::State& state) {
  const PassiveSystem sys = nacelle_block(ModelKind::hydraulic, BlockParameters{});
  for (auto _ : state) benchmark::DoNotOptimize(transfer_function(sys, 3.0));
}
BENCHMARK(BM_TransferFunction);

void BM_EigenReport(benchmark::State& state) {
  const DiscreteGenerator g = assemble_model(spec(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(eigen_report(g));
}
BENCHMARK(BM_EigenReport)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
