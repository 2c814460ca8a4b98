#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "affectbench/dsp.hpp"
#include "affectbench/features_eda.hpp"
#include "affectbench/features_ppg.hpp"
#include "affectbench/models.hpp"
#include "affectbench/rng.hpp"

namespace {

std::vector<double> noisy_signal(std::size_t n, std::uint64_t seed) {
    afb::Rng rng(seed);
    std::vector<double> x(n);
    for (double& v : x) v = 5.0 + 0.1 * rng.normal();
    return x;
}

void BM_WelchPsd(benchmark::State& state) {
    const auto x = noisy_signal(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(afb::dsp::welch_psd(x, 64.0));
}

void BM_EdaFeatures(benchmark::State& state) {
    const auto x = noisy_signal(static_cast<std::size_t>(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(afb::eda_features(x, 4.0));
}

void BM_PpgFeatures(benchmark::State& state) {
    afb::Rng rng(3);
    const double rate = 64.0;
    std::vector<double> x(static_cast<std::size_t>(state.range(0)));
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = std::sin(2.0 * 3.141592653589793 * 1.2 * static_cast<double>(i) / rate) +
               0.05 * rng.normal();
    for (auto _ : state) benchmark::DoNotOptimize(afb::ppg_features(x, rate));
}

void BM_ForestTrain(benchmark::State& state) {
    afb::Rng rng(4);
    const int n = static_cast<int>(state.range(0));
    Eigen::MatrixXd X(n, 8);
    std::vector<int> y;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < 8; ++j) X(i, j) = rng.normal() + (i % 2 ? 1.0 : 0.0);
        y.push_back(i % 2);
    }
    for (auto _ : state) benchmark::DoNotOptimize(afb::ForestModel::train(X, y, 50, 42));
}

BENCHMARK(BM_WelchPsd)->Arg(4096)->Arg(16384);
BENCHMARK(BM_EdaFeatures)->Arg(480)->Arg(3600);
BENCHMARK(BM_PpgFeatures)->Arg(7680);
BENCHMARK(BM_ForestTrain)->Arg(200)->Arg(800);

}  // namespace

BENCHMARK_MAIN();
