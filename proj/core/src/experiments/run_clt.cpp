#include <algorithm>
#include <cmath>

#include "levysim/errors.hpp"
#include "levysim/experiments/runners.hpp"
#include "runner_util.hpp"

namespace levysim::experiments {

namespace {

using namespace detail;

// The centered pure-jump process of the symmetric two-point measure takes
// lattice values eps0 * Z: Y_t = eps0 (P1 - P2) with P1, P2 independent
// Poisson(t / (2 eps0^2)). Exact simulation, cost = P1 + P2 jumps.
struct CltPoint {
    double eps0 = 0.0;
    double t = 0.0;
    double w2sq = 0.0;
    double ci = 0.0;
    double mean_jumps = 0.0;
};

CltPoint simulate_clt_point(const ExperimentConfig& cfg, std::size_t point_idx, double eps0,
                            double t) {
    CltPoint out;
    out.eps0 = eps0;
    out.t = t;
    Engine eng = make_engine(cfg.seed, kSimStream, point_idx);
    const PoissonSampler count(t / (2.0 * eps0 * eps0));
    std::vector<double> samples(cfg.paths);
    double jumps = 0.0;
    for (auto& y : samples) {
        const std::int64_t p1 = count(eng);
        const std::int64_t p2 = count(eng);
        jumps += static_cast<double>(p1 + p2);
        y = eps0 * static_cast<double>(p1 - p2);
    }
    out.mean_jumps = jumps / static_cast<double>(cfg.paths);
    const auto est = w2_to_gaussian(samples, 0.0, t, bootstrap_spec(cfg, point_idx));
    out.w2sq = est.value_squared;
    out.ci = est.ci_half_width;
    return out;
}

std::vector<double> expand_t_grid(const ExperimentConfig& cfg, double eps0) {
    std::vector<double> ts = cfg.t_grid;
    for (const double m : cfg.t_rel_grid) ts.push_back(m * eps0 * eps0);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    return ts;
}

}  // namespace

RateReport run_clt_check(const ExperimentConfig& cfg) {
    RateReport report;
    report.experiment = to_string(cfg.experiment);

    // Point list: bound grid (eps0 x t) first, then the slope grid at t = 1.
    struct Task {
        double eps0, t;
        bool slope_row;
    };
    std::vector<Task> tasks;
    for (const double eps0 : cfg.eps0_grid)
        for (const double t : expand_t_grid(cfg, eps0)) tasks.push_back({eps0, t, false});
    for (const double eps0 : cfg.slope_eps0_grid) tasks.push_back({eps0, 1.0, true});

    std::vector<CltPoint> results(tasks.size());
    run_tasks(tasks.size(), resolve_threads(cfg.threads), [&](std::size_t i) {
        results[i] = simulate_clt_point(cfg, i, tasks[i].eps0, tasks[i].t);
    });

    report.details_header = {"eps0", "t", "w2sq", "ci", "bound", "ratio", "mean_jumps"};
    double worst_ratio = 0.0;
    std::vector<double> slope_x, slope_y;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const auto& r = results[i];
        const double bound = cfg.cap_c * std::min(r.eps0 * r.eps0, r.t);
        const double ratio = r.w2sq / bound;
        if (!tasks[i].slope_row) {
            worst_ratio = std::max(worst_ratio, ratio);
            report.details_rows.push_back(
                {r.eps0, r.t, r.w2sq, r.ci, bound, ratio, r.mean_jumps});
        } else {
            report.rows.push_back({r.eps0, r.w2sq, r.ci, r.mean_jumps});
            slope_x.push_back(r.eps0);
            slope_y.push_back(r.w2sq);
        }
    }

    report.checks.push_back(check_le("w2sq_over_cap_bound_max_ratio", worst_ratio, 1.0));
    const auto fit = fit_loglog(slope_x, slope_y);
    report.fitted_slope = fit.slope;
    report.slope_ci = 1.96 * fit.slope_stderr;
    report.slope_fitted = true;
    report.checks.push_back(
        check_within("slope_vs_eps0_at_t1", fit.slope, cfg.slope_target, cfg.slope_tol));
    report.notes.push_back("cap constant " + std::to_string(cfg.cap_c) +
                           " is an empirical ceiling, not a derived constant");
    report.pass = all_pass(report.checks);
    return report;
}

RateReport run_clt_lower_bound(const ExperimentConfig& cfg) {
    RateReport report;
    report.experiment = to_string(cfg.experiment);

    struct Task {
        double eps0, t;
        bool profile_row;
    };
    std::vector<Task> tasks;
    for (const double eps0 : cfg.eps0_grid)
        for (const double t : expand_t_grid(cfg, eps0)) tasks.push_back({eps0, t, false});
    const double pe = cfg.profile_eps0;
    for (const double m : cfg.profile_t_rel_grid) tasks.push_back({pe, m * pe * pe, true});

    std::vector<CltPoint> results(tasks.size());
    run_tasks(tasks.size(), resolve_threads(cfg.threads), [&](std::size_t i) {
        results[i] = simulate_clt_point(cfg, i, tasks[i].eps0, tasks[i].t);
    });

    report.details_header = {"eps0", "t", "w2sq", "ci", "floor", "ratio", "mean_jumps"};
    double worst_ratio = std::numeric_limits<double>::infinity();
    std::vector<double> small_t, small_w2;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const auto& r = results[i];
        const double floor_bound = cfg.floor_c * std::min(r.t, r.eps0 * r.eps0);
        const double ratio = r.w2sq / floor_bound;
        worst_ratio = std::min(worst_ratio, ratio);
        report.details_rows.push_back(
            {r.eps0, r.t, r.w2sq, r.ci, floor_bound, ratio, r.mean_jumps});
        if (tasks[i].profile_row) {
            report.rows.push_back({r.t, r.w2sq, r.ci, r.mean_jumps});
            if (r.t <= r.eps0 * r.eps0) {
                small_t.push_back(r.t);
                small_w2.push_back(r.w2sq);
            }
        }
    }

    report.checks.push_back(check_ge("w2sq_over_floor_min_ratio", worst_ratio, 1.0));
    if (small_t.size() >= 5) {
        const auto fit = fit_loglog(small_t, small_w2);
        report.fitted_slope = fit.slope;
        report.slope_ci = 1.96 * fit.slope_stderr;
        report.slope_fitted = true;
        report.notes.push_back(
            "slope fitted on the t <= eps0^2 rows of the profile, informational only; "
            "the profile blends from the t-regime into the lattice plateau, which is the "
            "min-shape kink visible in report.csv");
    }
    report.notes.push_back("floor constant " + std::to_string(cfg.floor_c) +
                           " is an empirical floor, not a derived constant");
    report.pass = all_pass(report.checks);
    return report;
}

}  // namespace levysim::experiments
