#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "levysim/coupling.hpp"
#include "levysim/errors.hpp"
#include "levysim/experiments/runners.hpp"
#include "runner_util.hpp"

namespace levysim::experiments {

namespace {

using namespace detail;

double eps_for_n(const ExperimentConfig& cfg, std::int64_t n) {
    return cfg.eps_rule == "one-over-n" ? 1.0 / static_cast<double>(n) : cfg.eps;
}

double delta_eps_or_zero(const LevyMeasureSpec& nu, double eps) {
    try {
        return nu.delta_eps(eps);
    } catch (const DegenerateSmallJumpsError&) {
        return 0.0;
    }
}

}  // namespace

// Increment-gap mode of scheme-rate: sweep the two-point magnitude eps0 at
// fixed (n, eps) and compare the measured coupling gap E[(D - D^eps)^2]
// against the fourth-to-second truncated moment ratio it is bounded by.
RateReport run_scheme_rate_increment_gap(const ExperimentConfig& cfg) {
    RateReport report;
    report.experiment = to_string(cfg.experiment);
    report.notes.push_back("mode = increment-gap (eps0 sweep at fixed n and eps)");

    const std::size_t points = cfg.eps0_grid.size();
    std::vector<std::vector<double>> gaps(points);
    std::vector<double> mean_tail_jumps(points, 0.0);

    run_tasks(points, resolve_threads(cfg.threads), [&](std::size_t i) {
        const double eps0 = cfg.eps0_grid[i];
        LevyTriplet triplet{cfg.triplet.drift, cfg.triplet.brownian,
                            LevyMeasureSpec::two_point(eps0)};
        const EmpiricalCdf law = small_jump_sum_law(triplet, cfg.n_fixed, cfg.eps);
        Engine eng = make_engine(cfg.seed, kSimStream, i);
        const auto batch =
            sample_coupled_increment(triplet, cfg.n_fixed, cfg.eps, cfg.paths, law, eng);
        auto& g = gaps[i];
        g.resize(cfg.paths);
        double jumps = 0.0;
        for (std::size_t k = 0; k < cfg.paths; ++k) {
            const double d = batch.delta_exact[k] - batch.delta_approx[k];
            g[k] = d * d;
            jumps += batch.jump_counts[k];
        }
        mean_tail_jumps[i] = jumps / static_cast<double>(cfg.paths);
    });

    report.details_header = {"eps0", "gap_msq", "ci", "delta_eps", "ratio"};
    double worst_ratio = 0.0;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < points; ++i) {
        const double eps0 = cfg.eps0_grid[i];
        const double gap = mean_of(gaps[i]);
        const double ci = bootstrap_ci_for_point(cfg, i, gaps[i]);
        const double de = delta_eps_or_zero(LevyMeasureSpec::two_point(eps0), cfg.eps);
        const double ratio = de > 0.0 ? gap / (cfg.gap_cap_c * de) : 0.0;
        worst_ratio = std::max(worst_ratio, ratio);
        report.rows.push_back({eps0, gap, ci, mean_tail_jumps[i]});
        report.details_rows.push_back({eps0, gap, ci, de, ratio});
        xs.push_back(eps0);
        ys.push_back(gap);
    }

    report.checks.push_back(check_le("gap_over_cap_bound_max_ratio", worst_ratio, 1.0));
    const auto fit = fit_loglog(xs, ys);
    report.fitted_slope = fit.slope;
    report.slope_ci = 1.96 * fit.slope_stderr;
    report.slope_fitted = true;
    report.checks.push_back(
        check_within("gap_slope_vs_eps0", fit.slope, cfg.slope_target, cfg.slope_tol));
    report.notes.push_back("gap cap constant " + std::to_string(cfg.gap_cap_c) +
                           " is an empirical ceiling, not a derived constant");
    report.pass = all_pass(report.checks);

    if (cfg.dump_increments > 0) {
        // coupled pairs from the first grid point, re-drawn from its stream
        const double eps0 = cfg.eps0_grid.front();
        LevyTriplet triplet{cfg.triplet.drift, cfg.triplet.brownian,
                            LevyMeasureSpec::two_point(eps0)};
        const EmpiricalCdf law = small_jump_sum_law(triplet, cfg.n_fixed, cfg.eps);
        Engine eng = make_engine(cfg.seed, kSimStream, 0);
        const auto rows = std::min<std::size_t>(cfg.dump_increments, cfg.paths);
        const auto batch =
            sample_coupled_increment(triplet, cfg.n_fixed, cfg.eps, rows, law, eng);
        std::filesystem::create_directories(cfg.out_dir);
        std::ofstream out(std::filesystem::path(cfg.out_dir) / "increments.csv",
                          std::ios::binary);
        out << "delta_exact,delta_approx,tail_jumps\n";
        char line[96];
        for (std::size_t k = 0; k < rows; ++k) {
            std::snprintf(line, sizeof(line), "%.12g,%.12g,%u\n", batch.delta_exact[k],
                          batch.delta_approx[k], batch.jump_counts[k]);
            out << line;
        }
    }
    return report;
}

RateReport run_neglect_vs_gauss(const ExperimentConfig& cfg) {
    RateReport report;
    report.experiment = to_string(cfg.experiment);

    const auto& nu = cfg.triplet.measure;
    const bool inner_layer = nu.is_stable();
    const std::optional<double> inner =
        inner_layer ? std::optional<double>(cfg.inner_factor) : std::nullopt;

    const std::size_t points = cfg.n_grid.size();
    const ChunkPlan chunks = plan_chunks(cfg.paths, 2048);

    struct PointData {
        std::vector<double> s_values;
        std::vector<double> gap_gauss;
        std::vector<double> gap_neglect;
        std::vector<double> jumps;
    };
    std::vector<PointData> data(points);
    for (auto& d : data) {
        d.s_values.resize(cfg.paths);
        d.gap_gauss.resize(cfg.paths);
        d.gap_neglect.resize(cfg.paths);
        d.jumps.resize(cfg.paths);
    }

    // Phase A: draw the compensated small-jump sums (the tail jumps are shared
    // between both approximations and cancel from both gaps, so they are not
    // simulated; the cost column reports the small-jump simulation work).
    run_tasks(points * chunks.count, resolve_threads(cfg.threads), [&](std::size_t task) {
        const std::size_t pi = task / chunks.count;
        const std::size_t ci = task % chunks.count;
        const double eps = eps_for_n(cfg, cfg.n_grid[pi]);
        const SmallSumSampler sampler(cfg.triplet, eps, cfg.n_grid[pi], cfg.n_grid[pi], inner);
        auto state = sampler.make_state();
        Engine eng = make_engine(cfg.seed, kSimStream, pi, ci);
        for (std::size_t k = chunks.begin(ci); k < chunks.end(ci, cfg.paths); ++k) {
            sampler.reset(state);
            (void)sampler.draw_window(state, eng);
            data[pi].s_values[k] = sampler.canonical_value(state);
            data[pi].jumps[k] = static_cast<double>(state.jumps);
        }
    });

    // Phase B/C: per point, build the in-sample cdf and quantile-couple each
    // sum to its compensating Gaussian.
    run_tasks(points, resolve_threads(cfg.threads), [&](std::size_t pi) {
        const double eps = eps_for_n(cfg, cfg.n_grid[pi]);
        const SmallSumSampler sampler(cfg.triplet, eps, cfg.n_grid[pi], cfg.n_grid[pi], inner);
        const double sigma_s = std::sqrt(sampler.coarse_variance());
        const EmpiricalCdf cdf = EmpiricalCdf::from_samples(data[pi].s_values);
        Engine jitter = make_engine(cfg.seed, kJitterStream, pi);
        for (std::size_t k = 0; k < cfg.paths; ++k) {
            const double s = data[pi].s_values[k];
            const double u = cdf.rank_uniform(s, uniform_open(jitter));
            const double g = sigma_s * inv_norm_cdf(u);
            data[pi].gap_gauss[k] = (s - g) * (s - g);
            data[pi].gap_neglect[k] = s * s;
        }
    });

    report.details_header = {"n",       "eps",        "gap_neglect", "neglect_ci", "gap_gauss",
                             "gauss_ci", "delta_eps", "m2eps_over_n", "ordering_checked"};
    bool ordering_ok = true;
    std::size_t ordering_points = 0;
    for (std::size_t pi = 0; pi < points; ++pi) {
        const auto n = cfg.n_grid[pi];
        const double eps = eps_for_n(cfg, n);
        const double gauss = mean_of(data[pi].gap_gauss);
        const double neglect = mean_of(data[pi].gap_neglect);
        const double gauss_ci = bootstrap_ci_for_point(cfg, 2 * pi, data[pi].gap_gauss);
        const double neglect_ci = bootstrap_ci_for_point(cfg, 2 * pi + 1, data[pi].gap_neglect);
        const double de = delta_eps_or_zero(nu, eps);
        const double m2eps_n = nu.truncated_moment(2.0, eps) / static_cast<double>(n);
        const bool check_here = de > 0.0 && de < m2eps_n;
        if (check_here) {
            ++ordering_points;
            if (!(gauss < neglect)) ordering_ok = false;
        }
        report.rows.push_back({static_cast<double>(n), gauss, gauss_ci,
                               mean_of(data[pi].jumps)});
        report.details_rows.push_back({static_cast<double>(n), eps, neglect, neglect_ci, gauss,
                                       gauss_ci, de, m2eps_n, check_here ? 1.0 : 0.0});
    }

    report.checks.push_back(CheckLine{"gauss_gap_strictly_below_neglect_gap",
                                      ordering_ok ? 1.0 : 0.0, ">=", 1.0, ordering_ok});
    report.checks.push_back(check_ge("ordering_points_checked",
                                     static_cast<double>(ordering_points), 1.0));
    if (inner_layer)
        report.notes.push_back(
            "small-jump sums use the inner-truncation layer (exact jumps in (eps/" +
            std::to_string(cfg.inner_factor) +
            ", eps], Gaussian remainder) with an in-sample empirical cdf; "
            "approximation, not exact simulation");
    report.pass = all_pass(report.checks);

    if (cfg.dump_increments > 0 && !data.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        std::ofstream out(std::filesystem::path(cfg.out_dir) / "increments.csv",
                          std::ios::binary);
        out << "s,gap_gauss_sq,gap_neglect_sq\n";
        char line[96];
        const auto rows = std::min<std::size_t>(cfg.dump_increments, cfg.paths);
        for (std::size_t k = 0; k < rows; ++k) {
            std::snprintf(line, sizeof(line), "%.12g,%.12g,%.12g\n", data[0].s_values[k],
                          data[0].gap_gauss[k], data[0].gap_neglect[k]);
            out << line;
        }
    }
    return report;
}

RateReport run_cost_audit(const ExperimentConfig& cfg) {
    RateReport report;
    report.experiment = to_string(cfg.experiment);

    const std::size_t points = cfg.n_grid.size();
    const ChunkPlan chunks = plan_chunks(cfg.paths, 256);
    std::vector<std::vector<double>> costs(points);
    for (auto& c : costs) c.resize(cfg.paths);

    run_tasks(points * chunks.count, resolve_threads(cfg.threads), [&](std::size_t task) {
        const std::size_t pi = task / chunks.count;
        const std::size_t ci = task % chunks.count;
        const auto n = cfg.n_grid[pi];
        const double eps = eps_for_n(cfg, n);
        const auto params = make_params(cfg.triplet, n, eps);
        const ApproxIncrementSampler sampler(params, IncrementKind::GaussCompensated);
        const std::int64_t steps = grid_steps(n, cfg.horizon);
        for (std::size_t k = chunks.begin(ci); k < chunks.end(ci, cfg.paths); ++k) {
            Engine eng = make_engine(cfg.seed, kSimStream, pi, k);
            double jumps = 0.0;
            std::uint32_t cnt = 0;
            for (std::int64_t s = 0; s < steps; ++s) {
                (void)sampler.draw(eng, cnt);
                jumps += static_cast<double>(cnt);
            }
            costs[pi][k] = static_cast<double>(steps) + jumps;
        }
    });

    report.details_header = {"n", "eps", "mean_cost", "ci", "predicted", "rel_dev"};
    double worst_dev = 0.0;
    std::vector<double> xs, ys;
    for (std::size_t pi = 0; pi < points; ++pi) {
        const auto n = cfg.n_grid[pi];
        const double eps = eps_for_n(cfg, n);
        const double mean_cost = mean_of(costs[pi]);
        const double ci = bootstrap_ci_for_point(cfg, pi, costs[pi]);
        const double predicted =
            cfg.horizon * (static_cast<double>(n) + cfg.triplet.measure.tail_mass(eps));
        const double rel_dev = std::fabs(mean_cost / predicted - 1.0);
        worst_dev = std::max(worst_dev, rel_dev);
        report.rows.push_back({static_cast<double>(n), rel_dev, ci / predicted, mean_cost});
        report.details_rows.push_back(
            {static_cast<double>(n), eps, mean_cost, ci, predicted, rel_dev});
        xs.push_back(static_cast<double>(n));
        ys.push_back(mean_cost);
    }

    report.checks.push_back(check_le("max_relative_cost_deviation", worst_dev, cfg.cost_rel_tol));
    const auto fit = fit_loglog(xs, ys);
    report.fitted_slope = fit.slope;
    report.slope_ci = 1.96 * fit.slope_stderr;
    report.slope_fitted = true;
    double target = cfg.exponent_target;
    if (target == 0.0) {
        target = 1.0;
        if (const auto* st = std::get_if<TruncatedStableLike>(&cfg.triplet.measure.family()))
            if (cfg.eps_rule == "one-over-n") target = std::max(1.0, st->alpha);
    }
    report.checks.push_back(check_within("cost_exponent", fit.slope, target, cfg.exponent_tol));
    report.pass = all_pass(report.checks);
    return report;
}

}  // namespace levysim::experiments
