#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "kinemb/metrics.hpp"

using namespace kinemb;

namespace {

// Coarsely quantized scores so the tie-handling paths are exercised too.
std::pair<std::vector<double>, std::vector<int>> scored_labels(std::size_t n,
                                                               std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> level(0, 1023);
    std::bernoulli_distribution coin(0.3);
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        scores[i] = level(rng) / 1023.0;
        labels[i] = coin(rng) ? 1 : -1;
    }
    labels[0] = 1;
    labels[n - 1] = -1;
    return {std::move(scores), std::move(labels)};
}

}  // namespace

static void BM_Auroc(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto [scores, labels] = scored_labels(n, 1);
    for (auto _ : state) benchmark::DoNotOptimize(auroc(scores, labels));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}
BENCHMARK(BM_Auroc)->Range(1 << 10, 1 << 18);

static void BM_Auprc(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto [scores, labels] = scored_labels(n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(auprc(scores, labels));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}
BENCHMARK(BM_Auprc)->Range(1 << 10, 1 << 18);
