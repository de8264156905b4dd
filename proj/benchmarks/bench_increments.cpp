#include <benchmark/benchmark.h>

#include "levysim/increments.hpp"
#include "levysim/rng.hpp"

using namespace levysim;

static void BM_NormalDraw(benchmark::State& state) {
    Engine eng = make_engine(1, 100);
    double acc = 0.0;
    for (auto _ : state) acc += normal_draw(eng);
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_NormalDraw);

static void BM_PoissonDraw(benchmark::State& state) {
    const PoissonSampler sampler(static_cast<double>(state.range(0)) / 10.0);
    Engine eng = make_engine(2, 100);
    std::int64_t acc = 0;
    for (auto _ : state) acc += sampler(eng);
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_PoissonDraw)->Arg(5)->Arg(95)->Arg(105)->Arg(3000)->Arg(5000000);

static void BM_GaussCompensatedIncrement(benchmark::State& state) {
    // stable-like driver at n = 64, eps = 1/64: a few tail jumps per draw
    const LevyTriplet triplet{0.1, 1.0, LevyMeasureSpec::stable(1.5, 1.0, 1.0)};
    const auto params = make_params(triplet, 64, 1.0 / 64.0);
    const ApproxIncrementSampler sampler(params, IncrementKind::GaussCompensated);
    Engine eng = make_engine(3, 100);
    std::uint32_t jumps = 0;
    double acc = 0.0;
    for (auto _ : state) acc += sampler.draw(eng, jumps);
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_GaussCompensatedIncrement);

static void BM_ExactIncrementCompoundPoisson(benchmark::State& state) {
    const LevyTriplet triplet{0.1, 1.0,
                              LevyMeasureSpec::compound_poisson({{1.0, 2.0}, {-0.5, 4.0}})};
    const ExactIncrementSampler sampler(triplet, 64);
    Engine eng = make_engine(4, 100);
    std::uint32_t jumps = 0;
    double acc = 0.0;
    for (auto _ : state) acc += sampler.draw(eng, jumps);
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_ExactIncrementCompoundPoisson);

BENCHMARK_MAIN();
