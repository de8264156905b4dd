#include "levysim/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "levysim/errors.hpp"
#include "levysim/normal.hpp"
#include "levysim/rng.hpp"
#include "levysim/stats.hpp"

namespace levysim {

namespace {

// Sorted-matching cost between two sorted arrays of equal length.
double matched_cost(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return sum / static_cast<double>(a.size());
}

// Empirical quantile function of a sorted array at the midpoints (i-0.5)/L.
std::vector<double> requantile(std::span<const double> sorted, std::size_t target) {
    std::vector<double> out(target);
    const auto len = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < target; ++i) {
        const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(target);
        auto idx = static_cast<std::size_t>(u * len);
        if (idx >= sorted.size()) idx = sorted.size() - 1;
        out[i] = sorted[idx];
    }
    return out;
}

std::vector<double> resample_sorted(std::span<const double> pool, Engine& eng) {
    std::vector<double> out(pool.size());
    for (auto& v : out) v = pool[static_cast<std::size_t>(eng() % pool.size())];
    std::sort(out.begin(), out.end());
    return out;
}

double percentile_half_width(std::vector<double>& stats) {
    std::sort(stats.begin(), stats.end());
    const double lo = percentile_sorted(stats, 0.025);
    const double hi = percentile_sorted(stats, 0.975);
    return 0.5 * (hi - lo);
}

}  // namespace

W2Estimate w2_empirical(std::span<const double> a, std::span<const double> b,
                        const BootstrapSpec& bootstrap) {
    if (a.empty() || b.empty()) throw EmptyInputError("w2_empirical needs nonempty inputs");
    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa.size() != sb.size()) {
        const std::size_t target = std::max(sa.size(), sb.size());
        sa = requantile(sa, target);
        sb = requantile(sb, target);
    }

    W2Estimate est;
    est.sample_count = sa.size();
    est.value_squared = matched_cost(sa, sb);
    if (bootstrap.resamples > 0) {
        Engine eng = make_engine(bootstrap.seed, 0xB007u);
        std::vector<double> stats(static_cast<std::size_t>(bootstrap.resamples));
        for (auto& s : stats) {
            const auto ra = resample_sorted(sa, eng);
            const auto rb = resample_sorted(sb, eng);
            s = matched_cost(ra, rb);
        }
        est.ci_half_width = percentile_half_width(stats);
    }
    return est;
}

W2Estimate w2_to_gaussian(std::span<const double> samples, double mean, double var,
                          const BootstrapSpec& bootstrap) {
    if (samples.empty()) throw EmptyInputError("w2_to_gaussian needs nonempty input");
    if (var < 0.0) throw ConfigError("w2_to_gaussian needs var >= 0");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    const double sd = std::sqrt(var);
    std::vector<double> gauss(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(m);
        gauss[i] = mean + sd * inv_norm_cdf(u);
    }

    W2Estimate est;
    est.sample_count = m;
    est.value_squared = matched_cost(sorted, gauss);
    if (bootstrap.resamples > 0) {
        Engine eng = make_engine(bootstrap.seed, 0xB007u, 1);
        std::vector<double> stats(static_cast<std::size_t>(bootstrap.resamples));
        for (auto& s : stats) {
            const auto rs = resample_sorted(sorted, eng);
            s = matched_cost(rs, gauss);
        }
        est.ci_half_width = percentile_half_width(stats);
    }
    return est;
}

}  // namespace levysim
