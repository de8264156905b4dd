#pragma once

#include <span>

#include "levysim/rng.hpp"

namespace levysim {

double mean_of(std::span<const double> v);
/// Unbiased sample variance.
double variance_of(std::span<const double> v);
/// Biased (1/M) fourth central moment; used for variance-estimator std errors.
double fourth_central_moment(std::span<const double> v);

/// Linear interpolated percentile of an ascending-sorted array, q in [0,1].
double percentile_sorted(std::span<const double> sorted, double q);

/// Percentile-bootstrap half-width (2.5%..97.5%) for the mean of v.
double bootstrap_mean_ci(std::span<const double> v, int resamples, Engine& eng);

/// Ordinary least squares of y against x.
struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    std::size_t points = 0;
};

SlopeFit ols_fit(std::span<const double> x, std::span<const double> y);

/// OLS on (log x, log y). Rate fits refuse to run on fewer than min_points
/// grid points (ConfigError); all inputs must be positive.
SlopeFit fit_loglog(std::span<const double> x, std::span<const double> y,
                    std::size_t min_points = 5);

}  // namespace levysim
