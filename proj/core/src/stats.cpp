#include "levysim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "levysim/errors.hpp"

namespace levysim {

double mean_of(std::span<const double> v) {
    if (v.empty()) throw EmptyInputError("mean of empty array");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double variance_of(std::span<const double> v) {
    if (v.size() < 2) throw EmptyInputError("variance needs at least 2 values");
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

double fourth_central_moment(std::span<const double> v) {
    if (v.empty()) throw EmptyInputError("moment of empty array");
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) {
        const double d = (x - m) * (x - m);
        s += d * d;
    }
    return s / static_cast<double>(v.size());
}

double percentile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw EmptyInputError("percentile of empty array");
    if (q <= 0.0) return sorted.front();
    if (q >= 1.0) return sorted.back();
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

double bootstrap_mean_ci(std::span<const double> v, int resamples, Engine& eng) {
    if (v.empty()) throw EmptyInputError("bootstrap of empty array");
    if (resamples <= 0) return 0.0;
    std::vector<double> means(static_cast<std::size_t>(resamples));
    const auto m = static_cast<double>(v.size());
    for (auto& out : means) {
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i)
            s += v[static_cast<std::size_t>(eng() % v.size())];
        out = s / m;
    }
    std::sort(means.begin(), means.end());
    return 0.5 * (percentile_sorted(means, 0.975) - percentile_sorted(means, 0.025));
}

SlopeFit ols_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ConfigError("ols_fit needs equal-length arrays");
    if (x.size() < 2) throw ConfigError("ols_fit needs at least 2 points");
    const double mx = mean_of(x);
    const double my = mean_of(y);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0.0) throw ConfigError("ols_fit needs non-constant x values");
    SlopeFit fit;
    fit.points = x.size();
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (x.size() > 2) {
        double rss = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = y[i] - fit.intercept - fit.slope * x[i];
            rss += r * r;
        }
        fit.slope_stderr = std::sqrt(rss / static_cast<double>(x.size() - 2) / sxx);
    }
    return fit;
}

SlopeFit fit_loglog(std::span<const double> x, std::span<const double> y,
                    std::size_t min_points) {
    if (x.size() != y.size()) throw ConfigError("fit_loglog needs equal-length arrays");
    if (x.size() < min_points)
        throw ConfigError("slope fits require at least " + std::to_string(min_points) +
                          " grid points, got " + std::to_string(x.size()));
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= 0.0 || y[i] <= 0.0)
            throw ConfigError("fit_loglog needs strictly positive values");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    return ols_fit(lx, ly);
}

}  // namespace levysim
