#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "levysim/normal.hpp"

namespace levysim {

/// All randomness flows through explicitly seeded mt19937_64 engines; there
/// is no hidden global state. Parallel code derives one engine per task from
/// (master seed, stream coordinates) so results never depend on thread count.
using Engine = std::mt19937_64;

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}
}  // namespace detail

/// Deterministic substream seed: mixes the master seed with up to three
/// stream coordinates (purpose, grid-point index, chunk index).
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t purpose,
                                 std::uint64_t point = 0, std::uint64_t chunk = 0) {
    std::uint64_t s = master_seed;
    (void)detail::splitmix64(s);
    s ^= 0xA0761D6478BD642Full * (purpose + 1);
    (void)detail::splitmix64(s);
    s ^= 0xE7037ED1A0B428DBull * (point + 1);
    (void)detail::splitmix64(s);
    s ^= 0x8EBC6AF09C88C6E3ull * (chunk + 1);
    return detail::splitmix64(s);
}

/// Engine for one deterministic substream.
inline Engine make_engine(std::uint64_t master_seed, std::uint64_t purpose,
                          std::uint64_t point = 0, std::uint64_t chunk = 0) {
    std::uint64_t s = master_seed;
    (void)detail::splitmix64(s);
    s ^= 0xA0761D6478BD642Full * (purpose + 1);
    (void)detail::splitmix64(s);
    s ^= 0xE7037ED1A0B428DBull * (point + 1);
    (void)detail::splitmix64(s);
    s ^= 0x8EBC6AF09C88C6E3ull * (chunk + 1);
    const std::uint32_t w0 = static_cast<std::uint32_t>(detail::splitmix64(s));
    const std::uint32_t w1 = static_cast<std::uint32_t>(detail::splitmix64(s));
    const std::uint32_t w2 = static_cast<std::uint32_t>(detail::splitmix64(s));
    const std::uint32_t w3 = static_cast<std::uint32_t>(detail::splitmix64(s));
    std::seed_seq seq{w0, w1, w2, w3};
    return Engine(seq);
}

/// Uniform draw on the open interval (0, 1): 53 significant bits, offset by
/// half an ulp so 0 and 1 are unreachable and the quantile map stays finite.
inline double uniform_open(Engine& eng) {
    return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal draw by inversion of the uniform through the AS 241
/// quantile. Exact-distribution method (the sample is a deterministic
/// monotone map of a single uniform), which also keeps streams reproducible
/// across standard-library implementations.
inline double normal_draw(Engine& eng) {
    return inv_norm_cdf(uniform_open(eng));
}

/// Exact Poisson sampler.
///
/// Sequential inversion (product of uniforms) below mean 10, Hormann's PTRS
/// transformed-rejection above. Both branches sample the exact distribution;
/// no normal approximation anywhere.
class PoissonSampler {
public:
    explicit PoissonSampler(double mean) : mean_(mean) {
        if (mean_ < kInversionCutoff) {
            exp_neg_mean_ = std::exp(-mean_);
        } else {
            const double slam = std::sqrt(mean_);
            log_mean_ = std::log(mean_);
            b_ = 0.931 + 2.53 * slam;
            a_ = -0.059 + 0.02483 * b_;
            inv_alpha_ = 1.1239 + 1.1328 / (b_ - 3.4);
            v_r_ = 0.9277 - 3.6224 / (b_ - 2.0);
        }
    }

    double mean() const { return mean_; }

    std::int64_t operator()(Engine& eng) const {
        if (mean_ <= 0.0) return 0;
        if (mean_ < kInversionCutoff) return draw_inversion(eng);
        return draw_ptrs(eng);
    }

    static constexpr double kInversionCutoff = 10.0;

private:
    std::int64_t draw_inversion(Engine& eng) const {
        std::int64_t k = -1;
        double prod = 1.0;
        do {
            prod *= uniform_open(eng);
            ++k;
        } while (prod > exp_neg_mean_);
        return k;
    }

    std::int64_t draw_ptrs(Engine& eng) const {
        for (;;) {
            const double u = uniform_open(eng) - 0.5;
            const double v = uniform_open(eng);
            const double us = 0.5 - std::fabs(u);
            const auto k =
                static_cast<std::int64_t>(std::floor((2.0 * a_ / us + b_) * u + mean_ + 0.43));
            if (us >= 0.07 && v <= v_r_) return k;
            if (k < 0 || (us < 0.013 && v > us)) continue;
            if (std::log(v) + std::log(inv_alpha_) - std::log(a_ / (us * us) + b_) <=
                -mean_ + static_cast<double>(k) * log_mean_ -
                    std::lgamma(static_cast<double>(k) + 1.0)) {
                return k;
            }
        }
    }

    double mean_;
    double exp_neg_mean_ = 0.0;
    double b_ = 0.0, a_ = 0.0, inv_alpha_ = 0.0, v_r_ = 0.0, log_mean_ = 0.0;
};

/// One-shot Poisson draw; prefer a cached PoissonSampler in loops.
inline std::int64_t poisson_draw(double mean, Engine& eng) {
    return PoissonSampler(mean)(eng);
}

}  // namespace levysim
