#include <benchmark/benchmark.h>

#include "mlst/generators.hpp"
#include "mlst/patterns.hpp"
#include "mlst/potential.hpp"
#include "mlst/solver.hpp"

using namespace mlst;

static void BM_FptFlowerbed(benchmark::State& state) {
    Graph g = flowerbed(2);
    const int k = static_cast<int>(state.range(0));
    const int workers = static_cast<int>(state.range(1));
    std::uint64_t subsets = 0;
    for (auto _ : state) {
        Verdict v = fpt_decide(g, k, {false, workers});
        subsets = v.stats.subsets_enumerated;
        benchmark::DoNotOptimize(v.yes);
    }
    state.counters["subsets"] = static_cast<double>(subsets);
}
BENCHMARK(BM_FptFlowerbed)->Args({10, 1})->Args({11, 1})->Args({11, 4})->Unit(benchmark::kMillisecond);

static void BM_ExactRandom(benchmark::State& state) {
    Graph g = random_invariant_graph(static_cast<int>(state.range(0)), 3, 12345);
    for (auto _ : state) benchmark::DoNotOptimize(exact_max_leaves(g).leaves);
}
BENCHMARK(BM_ExactRandom)->DenseRange(12, 24, 4)->Unit(benchmark::kMillisecond);

static void BM_DetectBlossoms(benchmark::State& state) {
    Graph g = flowerbed(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(find_2blossoms(g).size());
}
BENCHMARK(BM_DetectBlossoms)->RangeMultiplier(4)->Range(2, 128);

static void BM_DetectNecklaces(benchmark::State& state) {
    Graph g = necklace_ring(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(find_2necklaces(g).size());
}
BENCHMARK(BM_DetectNecklaces)->RangeMultiplier(4)->Range(4, 256);

static void BM_Greedy(benchmark::State& state) {
    Graph g = random_invariant_graph(static_cast<int>(state.range(0)), 3, 777);
    for (auto _ : state) benchmark::DoNotOptimize(greedy_spanning_tree(g).leaves);
}
BENCHMARK(BM_Greedy)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
