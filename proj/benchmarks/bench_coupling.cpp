#include <benchmark/benchmark.h>

#include "levysim/coupling.hpp"
#include "levysim/rng.hpp"

using namespace levysim;

// Coupled coarse step with a two-point driver, as used by the scheme-rate
// experiment (Skellam law lookup + quantile transform per step).
static void BM_CoupledStepTwoPoint(benchmark::State& state) {
    const auto n = state.range(0);
    const LevyTriplet triplet{0.0, 1.0, LevyMeasureSpec::two_point(1.0 / 4096.0)};
    CoupledSchemeKernel::Options opt;
    opt.n = n;
    opt.eps_cut = 1.0 / static_cast<double>(n);
    opt.refine = 1;
    Engine law_eng = make_engine(5, 101);
    CoupledSchemeKernel kernel(triplet, opt, law_eng);
    Engine eng = make_engine(6, 101);
    double acc = 0.0;
    for (auto _ : state) acc += kernel.step(eng).coarse_approx;
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_CoupledStepTwoPoint)->Arg(16)->Arg(256)->Arg(1024);

// Refined step: 64 fine exact increments plus the coarse coupled pair.
static void BM_CoupledStepRefined(benchmark::State& state) {
    const LevyTriplet triplet{0.0, 1.0, LevyMeasureSpec::two_point(1.0 / 4096.0)};
    CoupledSchemeKernel::Options opt;
    opt.n = 64;
    opt.eps_cut = 1.0 / 64.0;
    opt.refine = 64;
    Engine law_eng = make_engine(7, 101);
    CoupledSchemeKernel kernel(triplet, opt, law_eng);
    Engine eng = make_engine(8, 101);
    std::vector<double> fine(64);
    double acc = 0.0;
    for (auto _ : state) acc += kernel.step(eng, fine).coarse_exact;
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_CoupledStepRefined);

static void BM_SkellamLawBuild(benchmark::State& state) {
    const double lambda = static_cast<double>(state.range(0));
    for (auto _ : state) {
        auto law = skellam_scaled_law(0.01, lambda);
        benchmark::DoNotOptimize(law);
    }
}
BENCHMARK(BM_SkellamLawBuild)->Arg(8)->Arg(512)->Arg(32768)->Unit(benchmark::kMillisecond);
