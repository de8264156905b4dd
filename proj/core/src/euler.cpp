#include "levysim/euler.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "levysim/errors.hpp"

namespace levysim {

SigmaFn sigma_constant(double value) {
    return SigmaFn{[value](double) { return value; }, 0.0, std::fabs(value), "constant"};
}

SigmaFn sigma_clipped_sine() {
    return SigmaFn{[](double x) { return std::sin(x); }, 1.0, 1.0, "clipped-sine"};
}

SigmaFn sigma_inverse_quadratic(double scale) {
    // |d/dx (1+x^2)^-1| peaks at x = 1/sqrt(3) with value 3 sqrt(3) / 8.
    return SigmaFn{[scale](double x) { return scale / (1.0 + x * x); },
                   scale * 0.6495190528383290, scale, "inverse-quadratic"};
}

double rho_n(std::int64_t n, double t) {
    if (n < 1) throw ConfigError("rho_n requires n >= 1");
    if (t < 0.0) throw ConfigError("rho_n requires t >= 0");
    return std::floor(static_cast<double>(n) * t) / static_cast<double>(n);
}

std::int64_t grid_steps(std::int64_t n, double horizon) {
    if (n < 1) throw ConfigError("grid requires n >= 1");
    if (horizon <= 0.0) throw ConfigError("grid requires horizon > 0");
    return static_cast<std::int64_t>(std::floor(static_cast<double>(n) * horizon));
}

PathGrid simulate_path(double x0, const SigmaFn& sigma, std::span<const double> increments,
                       std::int64_t n, double horizon) {
    const std::int64_t steps = grid_steps(n, horizon);
    if (static_cast<std::int64_t>(increments.size()) < steps)
        throw InsufficientIncrementsError("need " + std::to_string(steps) + " increments, got " +
                                          std::to_string(increments.size()));
    PathGrid path;
    path.n = n;
    path.horizon = horizon;
    path.values.resize(static_cast<std::size_t>(steps) + 1);
    double x = x0;
    path.values[0] = x;
    for (std::int64_t i = 0; i < steps; ++i) {
        x += sigma.eval(x) * increments[static_cast<std::size_t>(i)];
        path.values[static_cast<std::size_t>(i) + 1] = x;
    }
    return path;
}

double sup_error(const PathGrid& pa, const PathGrid& pb) {
    if (pa.n != pb.n || pa.horizon != pb.horizon || pa.values.size() != pb.values.size())
        throw GridMismatchError("sup_error requires identical grids");
    double sup = 0.0;
    for (std::size_t i = 0; i < pa.values.size(); ++i)
        sup = std::max(sup, std::fabs(pa.values[i] - pb.values[i]));
    return sup;
}

void write_path_csv(std::ostream& os, const PathGrid& path) {
    os << "t,value\n";
    char line[64];
    for (std::size_t i = 0; i < path.values.size(); ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(path.n);
        std::snprintf(line, sizeof(line), "%.12g,%.12g\n", t, path.values[i]);
        os << line;
    }
}

}  // namespace levysim
