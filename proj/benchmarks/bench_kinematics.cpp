#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "kinemb/kinematics.hpp"
#include "kinemb/temporal_graph.hpp"

using namespace kinemb;
using Eigen::MatrixXd;

namespace {

EmbeddingSequence random_sequence(std::size_t nodes, std::size_t dim, std::size_t steps,
                                  std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    EmbeddingSequence seq;
    for (std::size_t t = 0; t < steps; ++t) {
        MatrixXd m(nodes, dim);
        for (Eigen::Index k = 0; k < m.size(); ++k) m(k) = coord(rng);
        seq.steps.push_back(m);
    }
    return seq;
}

Snapshot random_snapshot(std::size_t nodes, std::size_t edges, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Edge> out;
    out.reserve(edges);
    while (out.size() < edges) {
        NodeId u = rng() % nodes, v = rng() % nodes;
        if (u != v) out.emplace_back(u, v);
    }
    return {0, std::move(out), nodes};
}

}  // namespace

static void BM_Velocities(benchmark::State& state) {
    const auto nodes = static_cast<std::size_t>(state.range(0));
    const auto seq = random_sequence(nodes, 32, 10, 1);
    for (auto _ : state) benchmark::DoNotOptimize(velocities(seq));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(nodes) * 9);
}
BENCHMARK(BM_Velocities)->Arg(64)->Arg(512)->Arg(4096);

static void BM_RecencyAverage(benchmark::State& state) {
    const auto nodes = static_cast<std::size_t>(state.range(0));
    const auto vels = velocities(random_sequence(nodes, 32, 9, 2));
    for (auto _ : state) benchmark::DoNotOptimize(recency_weighted_average(vels));
}
BENCHMARK(BM_RecencyAverage)->Arg(64)->Arg(512)->Arg(4096);

static void BM_NeighborhoodAverage(benchmark::State& state) {
    const auto nodes = static_cast<std::size_t>(state.range(0));
    const auto snap = random_snapshot(nodes, nodes * 8, 3);
    const auto seq = random_sequence(nodes, 32, 1, 4);
    for (auto _ : state) benchmark::DoNotOptimize(neighborhood_average(seq.steps[0], snap));
}
BENCHMARK(BM_NeighborhoodAverage)->Arg(64)->Arg(512)->Arg(4096);

static void BM_PredictLocations(benchmark::State& state) {
    const auto nodes = static_cast<std::size_t>(state.range(0));
    const auto seq = random_sequence(nodes, 32, 8, 5);
    const auto snap = random_snapshot(nodes, nodes * 8, 6);
    const MatrixXd predicted = seq.steps.back() - seq.steps[seq.steps.size() - 2];
    for (auto _ : state) benchmark::DoNotOptimize(predict_locations(seq, predicted, 3, snap));
}
BENCHMARK(BM_PredictLocations)->Arg(64)->Arg(512)->Arg(4096);

BENCHMARK_MAIN();
