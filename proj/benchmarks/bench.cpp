#include <benchmark/benchmark.h>

#include "support/instances.hpp"

namespace uniprice {
namespace {

using testing::R;

// n bidders with distinct values k/n and quantities cycling 1..4, m = n.
Market ladder(int n) {
  std::vector<std::pair<Rational, Rational>> vq;
  for (int k = n; k >= 1; --k) vq.emplace_back(Rational(k, n), Rational(1 + k % 4));
  return testing::market(n, vq);
}

void BM_SolveExample2(benchmark::State& state) {
  const Market m = testing::example2();
  for (auto _ : state) benchmark::DoNotOptimize(solve_equilibrium(m));
}
BENCHMARK(BM_SolveExample2);

void BM_SolveLadder(benchmark::State& state) {
  const Market m = ladder(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_equilibrium(m));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveLadder)->RangeMultiplier(2)->Range(4, 128)->Complexity();

void BM_ClockLadder(benchmark::State& state) {
  const Market m = ladder(static_cast<int>(state.range(0)));
  const StrategyMap s = truthful_strategies(m);
  for (auto _ : state) benchmark::DoNotOptimize(run_clock_auction(m, s));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ClockLadder)->RangeMultiplier(2)->Range(4, 64)->Complexity();

void BM_SolveRandom(benchmark::State& state) {
  testing::Rng rng(11);
  std::vector<Market> markets;
  for (int i = 0; i < 256; ++i) markets.push_back(validate_env(testing::random_auction(rng)));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(solve_equilibrium(markets[i++ % markets.size()]));
}
BENCHMARK(BM_SolveRandom);

void BM_ProcurementMirror(benchmark::State& state) {
  testing::Rng rng(13);
  std::vector<ProcurementMarket> markets;
  for (int i = 0; i < 256; ++i) markets.push_back(validate_procurement(testing::random_procurement(rng)));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(solve_procurement_via_mirror(markets[i++ % markets.size()]));
}
BENCHMARK(BM_ProcurementMirror);

void BM_VerifyExample2(benchmark::State& state) {
  const Market m = testing::example2();
  const GridConfig grid{Rational(1, state.range(0)), 1};
  const BidProfile p = grid_profile(solve_equilibrium(m), grid);
  for (auto _ : state) benchmark::DoNotOptimize(verify_epsilon_nash(m, p, grid));
}
BENCHMARK(BM_VerifyExample2)->Arg(10)->Arg(20)->Arg(40);

void BM_EnumerateExample2(benchmark::State& state) {
  const Market m = testing::example2();
  const GridConfig grid{Rational(1, 20), 1};
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_equilibria_on_grid(m, grid, 1'000'000));
}
BENCHMARK(BM_EnumerateExample2)->Unit(benchmark::kMillisecond);

void BM_EdgeworthDynamics(benchmark::State& state) {
  const Market m = testing::market(2, {{7, 2}, {5, 1}});
  DynamicsConfig config{R("0.5"), 100, {}};
  for (auto _ : state) benchmark::DoNotOptimize(best_response_dynamics(m, config));
}
BENCHMARK(BM_EdgeworthDynamics)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace uniprice

BENCHMARK_MAIN();
