#include <benchmark/benchmark.h>

#include "stabpair/igusa.hpp"
#include "stabpair/pairstab.hpp"
#include "stabpair/varieties.hpp"

using namespace stabpair;

namespace {

std::vector<LatticePoint> lattice_cloud(std::size_t dim, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_int_distribution<int> u(-6, 6);
  std::vector<LatticePoint> pts(count, LatticePoint(dim));
  for (auto& p : pts)
    for (auto& x : p) x = u(rng);
  return pts;
}

void hull(benchmark::State& state) {
  const auto pts = lattice_cloud(static_cast<std::size_t>(state.range(0)), 40, 1);
  for (auto _ : state) benchmark::DoNotOptimize(convex_hull(pts).halfspaces().size());
}
BENCHMARK(hull)->DenseRange(2, 5);

void act_resultant(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto r = rnc_resultant_symbolic(d);
  Rng rng(2);
  const auto g = GroupElement::random_sl(d + 1, rng);
  for (auto _ : state) benchmark::DoNotOptimize(act(g, r).terms().size());
}
BENCHMARK(act_resultant)->DenseRange(2, 4);

void symbolic_resultant(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rnc_resultant_symbolic(d).terms().size());
}
BENCHMARK(symbolic_resultant)->DenseRange(2, 4);

void monte_carlo_height(benchmark::State& state) {
  const auto p = rnc_hyperdiscriminant(static_cast<int>(state.range(0)));
  const HeightOptions o{{100'000, 3, 1, 64}, true};
  for (auto _ : state) benchmark::DoNotOptimize(height(p, o).h);
  state.SetItemsProcessed(state.iterations() * 100'000);
}
BENCHMARK(monte_carlo_height)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

void stable_sweep(benchmark::State& state) {
  const auto pair = normalized_pair_spec(rational_normal_curve(2));
  for (auto _ : state) benchmark::DoNotOptimize(stable_search(pair, 8, 50, StableVariant::pair, {0, 0, 1}).m);
}
BENCHMARK(stable_sweep)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
