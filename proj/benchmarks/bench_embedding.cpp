#include <benchmark/benchmark.h>

#include "kinemb/embedding.hpp"
#include "kinemb/synthetic.hpp"

using namespace kinemb;

namespace {

TemporalGraph drift_graph(std::size_t per_community) {
    DriftConfig cfg;
    cfg.nodes_per_community = per_community;
    cfg.num_snapshots = 8;
    return synthetic_drift_graph(cfg);
}

}  // namespace

static void BM_EmbedAligned(benchmark::State& state) {
    const auto g = drift_graph(static_cast<std::size_t>(state.range(0)));
    AlignedEmbedderConfig cfg;
    cfg.dim = 16;
    for (auto _ : state) benchmark::DoNotOptimize(embed_aligned(g, cfg));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g.num_nodes()) * 8);
}
BENCHMARK(BM_EmbedAligned)->Arg(30)->Arg(100)->Arg(250);

static void BM_EmbedAlignedWide(benchmark::State& state) {
    const auto g = drift_graph(100);
    AlignedEmbedderConfig cfg;
    cfg.dim = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(embed_aligned(g, cfg));
}
BENCHMARK(BM_EmbedAlignedWide)->Arg(8)->Arg(32)->Arg(128);
