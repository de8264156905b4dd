#include <benchmark/benchmark.h>

#include <vector>

#include "levysim/rng.hpp"
#include "levysim/wasserstein.hpp"

using namespace levysim;

static void BM_W2Empirical(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    Engine eng = make_engine(9, 102);
    std::vector<double> a(m), b(m);
    for (auto& v : a) v = normal_draw(eng);
    for (auto& v : b) v = normal_draw(eng) * 1.1;
    const BootstrapSpec no_ci{0, 0};
    for (auto _ : state) {
        auto est = w2_empirical(a, b, no_ci);
        benchmark::DoNotOptimize(est);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_W2Empirical)->Range(1 << 10, 1 << 17)->Complexity();

static void BM_W2ToGaussianWithBootstrap(benchmark::State& state) {
    Engine eng = make_engine(10, 102);
    std::vector<double> a(100000);
    for (auto& v : a) v = normal_draw(eng);
    for (auto _ : state) {
        auto est = w2_to_gaussian(a, 0.0, 1.0, BootstrapSpec{200, 42});
        benchmark::DoNotOptimize(est);
    }
}
BENCHMARK(BM_W2ToGaussianWithBootstrap)->Unit(benchmark::kMillisecond);
