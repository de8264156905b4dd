#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace levysim {

/// Diffusion coefficient for dX = sigma(X) dZ. The recursion only needs
/// eval; the bounds document the hypothesis the convergence statements rely
/// on and are spot-checked by the test harness, not enforced at runtime.
struct SigmaFn {
    std::function<double(double)> eval;
    double lipschitz_bound = 0.0;
    double sup_bound = 0.0;  // +infinity when unbounded
    std::string name;
};

SigmaFn sigma_constant(double value);
/// sin(x): 1-Lipschitz, bounded by 1.
SigmaFn sigma_clipped_sine();
/// scale / (1 + x^2): sup = scale, Lipschitz bound = scale * 3 sqrt(3) / 8.
SigmaFn sigma_inverse_quadratic(double scale);

/// One trajectory on the grid {i/n : 0 <= i <= floor(nT)}.
struct PathGrid {
    std::int64_t n = 1;
    double horizon = 1.0;
    std::vector<double> values;  // size floor(n * horizon) + 1

    double at_time_index(std::size_t i) const { return values[i]; }
    std::size_t steps() const { return values.empty() ? 0 : values.size() - 1; }
};

/// Grid projection floor(n t) / n.
double rho_n(std::int64_t n, double t);

/// Number of Euler steps on [0, T] with step 1/n, i.e. floor(n T).
std::int64_t grid_steps(std::int64_t n, double horizon);

/// Plain Euler recursion x_{i+1} = x_i + sigma(x_i) * increments[i]. No
/// clipping or stabilization; accumulation order is the loop order, so the
/// constant-sigma telescoping identity holds bitwise.
PathGrid simulate_path(double x0, const SigmaFn& sigma, std::span<const double> increments,
                       std::int64_t n, double horizon);

/// Max over grid indices of |pa - pb| (callers square as needed).
double sup_error(const PathGrid& pa, const PathGrid& pb);

/// CSV dump, header "t,value", one row per grid point.
void write_path_csv(std::ostream& os, const PathGrid& path);

}  // namespace levysim
