#include <benchmark/benchmark.h>

#include <random>

#include "csort/csort.hpp"

using namespace csort;

namespace {

Layer random_layer(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> gap(0.1, 3.0);
  Layer layer;
  layer.mass = 1;
  layer.band_hi = 1;
  double s = 0.0;
  for (int i = 0; i < 2 * n; ++i) {
    s += gap(rng);
    layer.points.push_back({s, i % 2 == 0 ? Side::kWorker : Side::kJob});
  }
  return layer;
}

// Unit atoms on a shared integer grid so that layers are long.
std::pair<DiscreteDistribution, DiscreteDistribution> random_economy(int atoms, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> skill(0, 4 * atoms);
  std::vector<Atom> w, j;
  for (int i = 0; i < atoms; ++i) {
    w.push_back({static_cast<double>(skill(rng)), 1});
    j.push_back({static_cast<double>(skill(rng)), 1});
  }
  return {DiscreteDistribution(w), DiscreteDistribution(j)};
}

const MismatchCost kCost = MismatchCost::power(PowerCostParams::symmetric(0.5, 1.0));

void BM_LayerSimple(benchmark::State& state) {
  const auto layer = random_layer(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_layer(layer, kCost, BellmanMethod::kSimple).values.full());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LayerSimple)->RangeMultiplier(2)->Range(8, 256)->Complexity(benchmark::oNCubed);

void BM_LayerEfficient(benchmark::State& state) {
  const auto layer = random_layer(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_layer(layer, kCost, BellmanMethod::kEfficient).values.full());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LayerEfficient)->RangeMultiplier(2)->Range(8, 1024)->Complexity(benchmark::oNSquared);

void BM_Solve(benchmark::State& state) {
  const auto [F, G] = random_economy(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(solve(F, G, kCost).total_cost);
}
BENCHMARK(BM_Solve)->RangeMultiplier(4)->Range(16, 1024);

void BM_ConstructDuals(benchmark::State& state) {
  const auto [F, G] = random_economy(static_cast<int>(state.range(0)), 3);
  const auto a = solve(F, G, kCost);
  const auto spec = identity_production(F, G, kCost);
  for (auto _ : state) benchmark::DoNotOptimize(construct_duals(a, spec).gap);
}
BENCHMARK(BM_ConstructDuals)->RangeMultiplier(4)->Range(16, 1024);

void BM_Oracle(benchmark::State& state) {
  const auto [F, G] = random_economy(static_cast<int>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(oracle_min_cost(F, G, kCost));
}
BENCHMARK(BM_Oracle)->Arg(8)->Arg(64)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
