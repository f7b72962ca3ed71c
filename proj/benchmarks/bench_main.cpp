#include <benchmark/benchmark.h>

#include <random>

#include "rrhom/pipeline.hpp"

using namespace rrhom;

namespace {

GraphPtr cerny(int n) {
    std::vector<std::string> ids;
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) ids.push_back(std::to_string(i));
    for (int i = 0; i < n; ++i) edges.push_back(Edge{"a" + std::to_string(i), i, (i + 1) % n});
    edges.push_back(Edge{"b0", 0, 1});
    for (int i = 1; i < n; ++i) edges.push_back(Edge{"b" + std::to_string(i), i, i});
    return MultiGraph::make_indexed(std::move(ids), std::move(edges));
}

GraphPtr random_graph(int states, int degree, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    while (true) {
        std::vector<std::string> ids;
        for (int i = 0; i < states; ++i) ids.push_back("v" + std::to_string(i));
        std::vector<Edge> edges;
        for (int i = 0; i < states; ++i)
            for (int t = 0; t < degree; ++t)
                edges.push_back(Edge{"e" + std::to_string(i) + "_" + std::to_string(t), i,
                                     static_cast<int>(rng() % states)});
        GraphPtr g = MultiGraph::make_indexed(std::move(ids), std::move(edges));
        if (is_strongly_connected(*g)) return g;
    }
}

void BM_MinimalFactor(benchmark::State& state) {
    GraphPtr g = random_graph(static_cast<int>(state.range(0)), 3, 42);
    for (auto _ : state) benchmark::DoNotOptimize(minimal_factor(g).graph->num_states());
}
BENCHMARK(BM_MinimalFactor)->Arg(8)->Arg(32)->Arg(128);

void BM_StabilityRelation(benchmark::State& state) {
    GraphPtr g = random_graph(static_cast<int>(state.range(0)), 2, 7);
    GraphHom phi = construct_right_resolver(minimal_factor(g));
    for (auto _ : state) benchmark::DoNotOptimize(stability_relation(phi).partition.num_blocks());
}
BENCHMARK(BM_StabilityRelation)->Arg(8)->Arg(16)->Arg(32);

void BM_RoadColourCerny(benchmark::State& state) {
    GraphPtr g = cerny(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(synchronize_to_cycle_of_bunches(g).chain.steps.size());
}
BENCHMARK(BM_RoadColourCerny)->Arg(4)->Arg(6)->Arg(8);

void BM_MaxBunchyFactor(benchmark::State& state) {
    GraphPtr g = random_graph(static_cast<int>(state.range(0)), 2, 13);
    for (auto _ : state) benchmark::DoNotOptimize(max_bunchy_factor(g).graph->num_states());
}
BENCHMARK(BM_MaxBunchyFactor)->Arg(8)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
