#pragma once

#include <cstdint>
#include <span>

namespace levysim {

/// Empirical squared quadratic Wasserstein distance with a bootstrap
/// percentile confidence interval on value_squared.
struct W2Estimate {
    double value_squared = 0.0;
    std::size_t sample_count = 0;
    double ci_half_width = 0.0;
};

struct BootstrapSpec {
    int resamples = 200;  // 0 disables the CI
    std::uint64_t seed = 0x5EEDBA5Eull;
};

/// W2^2 between two empirical laws: sort both and average squared gaps of
/// matched order statistics, which is the exact optimal pairing in one
/// dimension. Unequal sizes are quantile-resampled to the larger size.
W2Estimate w2_empirical(std::span<const double> a, std::span<const double> b,
                        const BootstrapSpec& bootstrap = {});

/// W2^2 between an empirical law and N(mean, var), evaluating the Gaussian
/// quantile at midpoint plotting positions (i - 0.5)/M.
W2Estimate w2_to_gaussian(std::span<const double> samples, double mean, double var,
                          const BootstrapSpec& bootstrap = {});

}  // namespace levysim
