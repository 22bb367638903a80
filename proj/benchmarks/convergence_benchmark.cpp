// OpenMP sweep against the serial reference, plus single transports per method.
#include <benchmark/benchmark.h>

#include "kendall/experiment.hpp"

namespace {

using namespace kendall;

ExperimentConfig sweep_config(int trials) {
  ExperimentConfig cfg;
  cfg.trials = trials;
  cfg.step_counts = {10, 20, 50, 100, 200};
  cfg.n_ref = 400;
  return cfg;
}

void BM_SweepParallel(benchmark::State& state) {
  const auto cfg = sweep_config(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_convergence(cfg));
}
BENCHMARK(BM_SweepParallel)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_SweepSerial(benchmark::State& state) {
  const auto cfg = sweep_config(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_convergence_serial(cfg));
}
BENCHMARK(BM_SweepSerial)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond)->UseRealTime();

template <TransportMethod M>
void BM_Transport(benchmark::State& state) {
  auto rng = trial_rng(0, 0);
  const TransportProblem p = sample_problem(3, static_cast<int>(state.range(1)), rng)
                                 .with_steps(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(transport(p, M));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Transport<TransportMethod::kEuler>)->Args({1000, 4})->Args({1000, 20});
BENCHMARK(BM_Transport<TransportMethod::kRK2>)->Args({1000, 4})->Args({1000, 20});
BENCHMARK(BM_Transport<TransportMethod::kRK4>)->Args({1000, 4})->Args({1000, 20});
BENCHMARK(BM_Transport<TransportMethod::kPoleLadder>)->Args({1000, 4})->Args({1000, 20});

}  // namespace

BENCHMARK_MAIN();
