#include <benchmark/benchmark.h>

#include "sfde/solver.hpp"
#include "sfde/stochastic.hpp"
#include "sfde/systems.hpp"
#include "sfde/weights.hpp"

namespace {

void BM_WeightTable(benchmark::State& state) {
  const auto steps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    sfde::WeightTable table(0.9, 0.005, steps, sfde::WeightMode::standard);
    benchmark::DoNotOptimize(table.corrector(steps - 1, 0));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_WeightTable)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void BM_GeneratePath(benchmark::State& state) {
  const auto grid = sfde::TimeGrid::make(1.0, 1.0 / static_cast<double>(state.range(0)));
  std::uint64_t index = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sfde::generate_path(1, index++, grid, 3));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 3);
}
BENCHMARK(BM_GeneratePath)->Range(256, 16384);

// Whole-trajectory solve; cost grows quadratically because every step sums the full history.
void BM_SolveNewtonLeipnik(benchmark::State& state) {
  const auto model = sfde::newton_leipnik();
  sfde::SolverConfig cfg;
  cfg.alpha = 0.93;
  cfg.grid = sfde::TimeGrid::make(0.005 * static_cast<double>(state.range(0)), 0.005);
  cfg.stochastic = true;
  const auto path = sfde::generate_path(1, 0, cfg.grid, model.noise_dimension());
  for (auto _ : state) benchmark::DoNotOptimize(sfde::solve(model, cfg, path));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveNewtonLeipnik)->RangeMultiplier(2)->Range(500, 8000)->Complexity(benchmark::oNSquared);

void BM_SolveLorenzDeterministic(benchmark::State& state) {
  const auto model = sfde::lorenz();
  sfde::SolverConfig cfg;
  cfg.alpha = 0.88;
  cfg.grid = sfde::TimeGrid::make(0.005 * static_cast<double>(state.range(0)), 0.005);
  for (auto _ : state) benchmark::DoNotOptimize(sfde::solve(model, cfg));
}
BENCHMARK(BM_SolveLorenzDeterministic)->Arg(2000);

}  // namespace
BENCHMARK_MAIN();
