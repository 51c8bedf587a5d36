#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "kinemb/recurrent.hpp"

using namespace kinemb;
using Eigen::VectorXd;

namespace {

std::vector<TrainSample> random_dataset(std::size_t count, std::size_t dim, std::size_t window,
                                        std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    std::vector<TrainSample> data(count);
    for (auto& s : data) {
        for (std::size_t k = 0; k < window; ++k) {
            VectorXd x(static_cast<Eigen::Index>(dim));
            for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = coord(rng);
            s.window.push_back(x);
        }
        s.target = VectorXd::Zero(static_cast<Eigen::Index>(dim));
        for (Eigen::Index i = 0; i < s.target.size(); ++i) s.target(i) = coord(rng);
    }
    return data;
}

}  // namespace

static void BM_Forward(benchmark::State& state) {
    const auto dim = static_cast<std::size_t>(state.range(0));
    RecurrentModel m(dim, {64, 32, dim}, 1);
    const auto data = random_dataset(1, dim, 3, 2);
    for (auto _ : state) benchmark::DoNotOptimize(m.forward(data[0].window));
}
BENCHMARK(BM_Forward)->Arg(4)->Arg(32)->Arg(128);

static void BM_Gradient(benchmark::State& state) {
    const auto dim = static_cast<std::size_t>(state.range(0));
    RecurrentModel m(dim, {64, 32, dim}, 1);
    const auto data = random_dataset(1, dim, 3, 3);
    for (auto _ : state) benchmark::DoNotOptimize(analytic_gradient(m, data[0]));
}
BENCHMARK(BM_Gradient)->Arg(4)->Arg(32)->Arg(128);

static void BM_TrainEpoch(benchmark::State& state) {
    const auto dim = static_cast<std::size_t>(state.range(0));
    const auto data = random_dataset(256, dim, 3, 4);
    TrainConfig cfg;
    cfg.epochs = 1;
    for (auto _ : state) {
        state.PauseTiming();
        RecurrentModel m(dim, {64, 32, dim}, 1);
        state.ResumeTiming();
        benchmark::DoNotOptimize(train(m, data, cfg, 5));
    }
    state.SetItemsProcessed(state.iterations() * 256);
}
BENCHMARK(BM_TrainEpoch)->Arg(4)->Arg(32);
