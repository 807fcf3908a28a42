// Serial against OpenMP for the kernels that have both paths.
#include <benchmark/benchmark.h>

#include <cmath>

#include "pnpfv/mesh.hpp"
#include "pnpfv/scenarios.hpp"
#include "pnpfv/system.hpp"

using namespace pnpfv;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::parallel : Execution::serial; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) ? "parallel" : "serial"); }

void BM_CellAverages(benchmark::State& state) {
  const auto f = PiecewiseCoefficient::smooth([](double x) { return 20.0 * (1.0 - 0.9 * std::exp(-x * x * x * x)); });
  const Grid g(static_cast<std::size_t>(state.range(1)), -10.0, 10.0);
  for (auto _ : state) benchmark::DoNotOptimize(cell_averages(f, g, mode(state)));
  label(state);
}
BENCHMARK(BM_CellAverages)->ArgsProduct({{0, 1}, {1 << 12, 1 << 18}})->UseRealTime();

// Three species, so the parallel path solves the transports concurrently.
void BM_Step(benchmark::State& state) {
  auto cfg = default_config(ScenarioId::ex4_4);
  cfg.n_cells = static_cast<std::size_t>(state.range(1));
  const PnpModel model(build_system(cfg), mode(state));
  const State s0 = initial_state(model, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(model.step(s0));
  label(state);
}
BENCHMARK(BM_Step)->ArgsProduct({{0, 1}, {200, 1 << 16}})->UseRealTime();

void BM_SteadySweep(benchmark::State& state) {
  std::vector<ScenarioConfig> cfgs;
  for (double q : {0.0, 0.1, 0.2}) {
    for (double shape : {1.0 / 3.0, 1.0 / 5.0}) {
      auto c = default_config(ScenarioId::ex4_2);
      c.geometry->q0 = q;
      c.geometry->r_c = c.geometry->l_c = shape;
      cfgs.push_back(c);
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(steady_sweep(cfgs, mode(state)));
  label(state);
}
BENCHMARK(BM_SteadySweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->Iterations(2)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
