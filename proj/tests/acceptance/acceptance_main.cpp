// Acceptance suite: end-to-end verification of the library's statistical
// claims at desk scale. Each criterion prints exactly one PASS/FAIL line;
// the process exits 0 iff all pass. Every tolerance is pinned here in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "levysim/coupling.hpp"
#include "levysim/errors.hpp"
#include "levysim/experiments/config.hpp"
#include "levysim/experiments/report.hpp"
#include "levysim/experiments/runners.hpp"
#include "levysim/increments.hpp"
#include "levysim/measure.hpp"
#include "levysim/normal.hpp"
#include "levysim/stats.hpp"
#include "levysim/wasserstein.hpp"
#include "quadrature.hpp"
#include "stats_oracles.hpp"

using namespace levysim;
namespace expt = levysim::experiments;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

expt::ExperimentConfig parse(const std::string& text, expt::ExperimentKind kind) {
    return expt::parse_config_text(text, kind);
}

Outcome from_report(const expt::RateReport& report, const std::string& out_dir) {
    expt::write_report_files(report, out_dir);
    Outcome o;
    o.pass = report.pass;
    std::ostringstream d;
    if (report.slope_fitted)
        d << "slope " << fmt(report.fitted_slope) << " +- " << fmt(report.slope_ci) << "; ";
    for (const auto& c : report.checks)
        d << c.name << " " << fmt(c.value) << " " << c.relation << " " << fmt(c.threshold)
          << (c.pass ? " ok; " : " FAIL; ");
    o.detail = d.str();
    return o;
}

// ---------------------------------------------------------------------------
// C1: exact moment identities plus quadrature cross-check
// ---------------------------------------------------------------------------
Outcome c1_moment_identities() {
    Outcome o;
    o.pass = true;
    for (const double eps0 : {0.2, 0.1, 0.05, 0.01}) {
        const auto mu = LevyMeasureSpec::two_point(eps0);
        if (mu.moment(2.0) != 1.0) o.pass = false;
        if (std::fabs(mu.moment(4.0) - eps0 * eps0) > 1e-15 * eps0 * eps0) o.pass = false;
    }
    // 20-point (alpha, order, eps) grid: closed forms vs adaptive quadrature
    std::size_t grid_points = 0;
    double worst = 0.0;
    for (const double alpha : {0.4, 0.9, 1.3, 1.6, 1.9}) {
        const double c = 0.8, R = 1.2;
        const auto nu = LevyMeasureSpec::stable(alpha, c, R);
        for (const double k : {2.0, 4.0}) {
            for (const double eps : {0.3, 1e9}) {
                const double p = k - 1.0 - alpha;
                const double hi = std::min(eps, R);
                const double quad =
                    2.0 * c *
                    testsupport::integrate_power_singular(
                        [p](double z) { return std::pow(z, p); }, hi, p);
                const double closed = eps >= 1e9 ? nu.moment(k) : nu.truncated_moment(k, eps);
                worst = std::max(worst, std::fabs(closed - quad) / quad);
                ++grid_points;
            }
        }
    }
    if (grid_points < 20 || worst > 1e-8) o.pass = false;
    o.detail = "m2=1 and m4=eps0^2 exact; " + std::to_string(grid_points) +
               "-point quadrature cross-check, worst rel err " + fmt(worst) + " (<= 1e-8)";
    return o;
}

// ---------------------------------------------------------------------------
// C2: universal inequalities on a 100-point (family, eps) grid
// ---------------------------------------------------------------------------
Outcome c2_universal_inequalities() {
    Outcome o;
    std::vector<LevyMeasureSpec> specs;
    specs.push_back(LevyMeasureSpec::two_point(0.05));
    specs.push_back(LevyMeasureSpec::two_point(0.4));
    specs.push_back(LevyMeasureSpec::stable(0.5, 1.0, 1.0));
    specs.push_back(LevyMeasureSpec::stable(1.8, 2.0, 0.7));
    specs.push_back(LevyMeasureSpec::compound_poisson({{0.3, 2.0}, {-0.6, 1.0}, {1.1, 0.25}}));
    std::size_t points = 0, passed = 0;
    for (const auto& nu : specs) {
        const double m2 = nu.moment(2.0);
        for (int i = 1; i <= 20; ++i) {
            const double eps = 0.06 * i;
            ++points;
            bool ok = nu.tail_mass(eps) <= m2 / (eps * eps) * (1.0 + 1e-12);
            try {
                ok = ok && nu.delta_eps(eps) <= eps * eps * (1.0 + 1e-12);
            } catch (const DegenerateSmallJumpsError&) {
                // no small-jump mass: delta_eps is undefined there by contract
            }
            if (ok) ++passed;
        }
    }
    o.pass = points == 100 && passed == points;
    o.detail = std::to_string(passed) + "/" + std::to_string(points) +
               " grid points satisfy delta_eps <= eps^2 and F_eps <= m2/eps^2";
    return o;
}

// ---------------------------------------------------------------------------
// C3: increment law contract at M = 1e5 with 4 sigma bounds
// ---------------------------------------------------------------------------
Outcome c3_increment_law() {
    Outcome o;
    o.pass = true;
    std::ostringstream d;
    const LevyTriplet triplets[] = {
        {0.7, 0.5, LevyMeasureSpec::two_point(0.1)},
        {-0.4, 1.0, LevyMeasureSpec::stable(1.5, 1.0, 1.0)},
    };
    std::uint64_t point = 0;
    for (const auto& triplet : triplets) {
        const std::int64_t n = 32;
        const double eps = 0.2;
        const auto params = make_params(triplet, n, eps);
        Engine eng = make_engine(kSeed, 301, point++);
        const auto batch = sample_gauss_compensated(params, 100000, eng);
        const double want_mean = triplet.drift / static_cast<double>(n);
        const double want_var =
            (triplet.brownian * triplet.brownian + triplet.measure.moment(2.0)) /
            static_cast<double>(n);
        const double mean_dev = std::fabs(testsupport::mean(batch.values) - want_mean) /
                                testsupport::se_mean(batch.values);
        const double var_dev =
            std::fabs(testsupport::sample_variance(batch.values) - want_var) /
            testsupport::se_variance(batch.values);
        if (mean_dev > 4.0 || var_dev > 4.0) o.pass = false;
        d << "mean dev " << fmt(mean_dev) << " sigma, var dev " << fmt(var_dev) << " sigma; ";
    }
    o.detail = d.str() + "(both <= 4)";
    return o;
}

// ---------------------------------------------------------------------------
// C4/C5: CLT upper and lower bounds
// ---------------------------------------------------------------------------
const char* kCltConfig = R"(
[clt-check]
eps0_grid = 0.2, 0.1, 0.05
t_rel_grid = 0.25, 1, 4
t_grid = 1.0
slope_eps0_grid = 0.2, 0.1414, 0.1, 0.0707, 0.05
cap_c = 5.0
slope_target = 2.0
slope_tol = 0.3
paths = 100000
seed = 20240601

[clt-lower-bound]
eps0_grid = 0.2, 0.1, 0.05
t_rel_grid = 0.25, 1, 4
t_grid = 1.0
floor_c = 0.01
profile_eps0 = 0.1
profile_t_rel_grid = 0.0625, 0.125, 0.25, 0.5, 1, 2, 4, 16, 100
paths = 100000
seed = 20240601
)";

Outcome c4_clt_upper() {
    const auto cfg = parse(kCltConfig, expt::ExperimentKind::CltCheck);
    return from_report(expt::run_clt_check(cfg), "acceptance_out/clt-check");
}

Outcome c5_clt_lower() {
    const auto cfg = parse(kCltConfig, expt::ExperimentKind::CltLowerBound);
    return from_report(expt::run_clt_lower_bound(cfg), "acceptance_out/clt-lower-bound");
}

// ---------------------------------------------------------------------------
// C6: increment-level coupling gap against delta_eps
// ---------------------------------------------------------------------------
Outcome c6_coupling_gap() {
    const auto cfg = parse(R"(
[scheme-rate]
mode = increment-gap
family = two-point
eps0 = 0.05
eps0_grid = 0.2, 0.1, 0.05, 0.04, 0.03, 0.025, 0.02
n = 100
eps = 0.5
a = 0.3
b = 0.5
gap_cap_c = 5.0
slope_target = 2.0
slope_tol = 0.3
paths = 100000
seed = 20240601
)",
                           expt::ExperimentKind::SchemeRate);
    return from_report(expt::run_scheme_rate(cfg), "acceptance_out/coupling-gap");
}

// ---------------------------------------------------------------------------
// C7: Euler baseline rate
// ---------------------------------------------------------------------------
Outcome c7_euler_baseline() {
    const auto cfg = parse(R"(
[euler-baseline]
family = compound-poisson
atoms = 1:1; -0.5:2
a = 0.1
b = 1.0
sigma = clipped-sine
x0 = 0.3
T = 1.0
n_grid = 16, 32, 64, 128, 256, 512
refine = 64
slope_target = -1.0
slope_tol = 0.3
paths = 10000
seed = 20240601
)",
                           expt::ExperimentKind::EulerBaseline);
    return from_report(expt::run_euler_baseline(cfg), "acceptance_out/euler-baseline");
}

// ---------------------------------------------------------------------------
// C8: scheme strong-error rate along eps = 1/n, plus the zero-measure
// consistency cross-check against the Euler baseline
// ---------------------------------------------------------------------------
Outcome c8_scheme_rate() {
    const auto cfg = parse(R"(
[scheme-rate]
family = two-point
eps0 = 0.000244140625
a = 0.2
b = 1.0
sigma = clipped-sine
x0 = 0.3
T = 1.0
mode = path-rate
n_grid = 16, 32, 64, 128, 256, 512, 1024
eps_rule = one-over-n
refine = 64
slope_max = -0.65
paths = 10000
seed = 20240601
)",
                           expt::ExperimentKind::SchemeRate);
    auto outcome = from_report(expt::run_scheme_rate(cfg), "acceptance_out/scheme-rate");
    if (!outcome.pass) return outcome;

    // Degenerate run: with no jump measure the scheme is the plain Euler
    // scheme, so its numbers must match euler-baseline on the same driver.
    const char* degenerate = R"(
[scheme-rate]
family = none
a = 0.2
b = 1.0
sigma = clipped-sine
x0 = 0.3
mode = path-rate
n_grid = 16, 32, 64, 128, 256
eps_rule = one-over-n
refine = 64
slope_max = -0.65
paths = 10000
seed = 20240601

[euler-baseline]
family = none
a = 0.2
b = 1.0
sigma = clipped-sine
x0 = 0.3
n_grid = 16, 32, 64, 128, 256
refine = 64
slope_target = -1.0
slope_tol = 0.3
paths = 10000
seed = 20240601
)";
    const auto scheme0 =
        expt::run_scheme_rate(parse(degenerate, expt::ExperimentKind::SchemeRate));
    const auto euler0 =
        expt::run_euler_baseline(parse(degenerate, expt::ExperimentKind::EulerBaseline));
    expt::write_report_files(scheme0, "acceptance_out/scheme-rate-nu0");
    expt::write_report_files(euler0, "acceptance_out/euler-baseline-nu0");
    double worst = 0.0;
    bool match = scheme0.rows.size() == euler0.rows.size();
    for (std::size_t i = 0; match && i < scheme0.rows.size(); ++i) {
        const auto& a = scheme0.rows[i];
        const auto& b = euler0.rows[i];
        // independent estimates of the same quantity, different shared-noise
        // refinement structures: compare within 1.5x the combined 95% CIs
        const double slack = 1.5 * (a.ci_half_width + b.ci_half_width);
        worst = std::max(worst, std::fabs(a.error - b.error) / slack);
        if (std::fabs(a.error - b.error) > slack) match = false;
    }
    outcome.pass = outcome.pass && match;
    outcome.detail += "nu=0 run vs euler-baseline: worst |diff|/(1.5*(ci_a+ci_b)) = " +
                      fmt(worst) + (match ? " ok" : " FAIL");
    return outcome;
}

// ---------------------------------------------------------------------------
// C9: neglect-vs-Gaussian ordering for alpha = 1.8
// ---------------------------------------------------------------------------
Outcome c9_neglect_vs_gauss() {
    const auto cfg = parse(R"(
[neglect-vs-gauss]
family = stable
alpha = 1.8
c = 1
R = 1
n_grid = 16, 32, 64, 128, 256
eps_rule = one-over-n
inner_factor = 64
paths = 4000
seed = 20240601
)",
                           expt::ExperimentKind::NeglectVsGauss);
    return from_report(expt::run_neglect_vs_gauss(cfg), "acceptance_out/neglect-vs-gauss");
}

// ---------------------------------------------------------------------------
// C10: Brownian approximation rate
// ---------------------------------------------------------------------------
Outcome c10_brownian_approx() {
    const auto cfg = parse(R"(
[brownian-approx]
a = 0.0
b = 0.5
sigma = clipped-sine
x0 = 0.3
T = 1.0
eps_grid = 0.2, 0.1, 0.05, 0.025, 0.0125
p = 8
refine = 64
slope_min = 0.75
paths = 10000
seed = 20240601
)",
                           expt::ExperimentKind::BrownianApprox);
    return from_report(expt::run_brownian_approx(cfg), "acceptance_out/brownian-approx");
}

// ---------------------------------------------------------------------------
// C11: cost audit at alpha = 1.5 and alpha = 0.5
// ---------------------------------------------------------------------------
Outcome c11_cost_audit() {
    const char* text = R"(
[cost-audit]
family = stable
alpha = %ALPHA%
c = 1
R = 1
T = 1.0
n_grid = 64, 128, 256, 512, 1024
eps_rule = one-over-n
cost_rel_tol = 0.05
exponent_tol = 0.15
paths = 1000
seed = 20240601
)";
    Outcome o;
    o.pass = true;
    for (const std::string alpha : {"1.5", "0.5"}) {
        std::string t(text);
        t.replace(t.find("%ALPHA%"), 7, alpha);
        const auto cfg = parse(t, expt::ExperimentKind::CostAudit);
        const auto report = expt::run_cost_audit(cfg);
        expt::write_report_files(report, "acceptance_out/cost-audit-alpha" + alpha);
        o.pass = o.pass && report.pass;
        o.detail += "alpha=" + alpha + ": exponent " + fmt(report.fitted_slope) +
                    (report.pass ? " ok; " : " FAIL; ");
    }
    o.detail += "(targets 1.5 and 1.0, tol 0.15; cost within 5% of T(n+F_eps))";
    return o;
}

// ---------------------------------------------------------------------------
// C12: instrument validity
// ---------------------------------------------------------------------------
Outcome c12_instrument_validity() {
    Outcome o;
    o.pass = true;

    // sorted matching equals the exhaustive pairing minimum on 2- and 3-point
    // instances
    Engine eng = make_engine(kSeed, 312);
    double worst_pairing = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        for (std::size_t len : {2u, 3u}) {
            std::vector<double> a(len), b(len);
            for (auto& v : a) v = 4.0 * (uniform_open(eng) - 0.5);
            for (auto& v : b) v = 4.0 * (uniform_open(eng) - 0.5);
            const double fast = w2_empirical(a, b, BootstrapSpec{0, 0}).value_squared;
            const double brute = testsupport::w2sq_bruteforce(a, b);
            worst_pairing = std::max(worst_pairing, std::fabs(fast - brute));
            if (std::fabs(fast - brute) > 1e-12) o.pass = false;
        }
    }

    // quantile-coupling gap matches sorted-matching W2^2 within 2% at M = 1e5
    const double eps0 = 0.25;
    std::vector<double> samples(100000);
    for (auto& s : samples) s = (eng() & 1u) ? eps0 : -eps0;
    const auto cdf = EmpiricalCdf::from_samples(samples);
    const auto g = quantile_couple_to_gaussian(samples, 0.0, eps0, cdf, eng);
    double msq = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i)
        msq += (samples[i] - g[i]) * (samples[i] - g[i]);
    msq /= static_cast<double>(samples.size());
    const double sorted =
        w2_to_gaussian(samples, 0.0, eps0 * eps0, BootstrapSpec{0, 0}).value_squared;
    const double rel = std::fabs(msq - sorted) / sorted;
    if (rel > 0.02) o.pass = false;

    o.detail = "exhaustive pairing worst |diff| " + fmt(worst_pairing) +
               "; coupling-vs-sorted rel diff " + fmt(rel) + " (<= 0.02)";
    return o;
}

// ---------------------------------------------------------------------------
// C13: byte-identical reports across thread counts {1, 4}
// ---------------------------------------------------------------------------
std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome c13_determinism() {
    Outcome o;
    o.pass = true;
    struct Case {
        expt::ExperimentKind kind;
        std::string text;
        std::string name;
    };
    const std::vector<Case> cases = {
        {expt::ExperimentKind::CostAudit,
         "[cost-audit]\nfamily = stable\nalpha = 1.5\nn_grid = 16,32,64,128,256\n"
         "eps_rule = one-over-n\npaths = 1000\nseed = 20240601\n",
         "cost-audit"},
        {expt::ExperimentKind::CltCheck,
         "[clt-check]\neps0_grid = 0.2, 0.1\nt_rel_grid = 1, 4\n"
         "slope_eps0_grid = 0.2, 0.1414, 0.1, 0.0707, 0.05\npaths = 1000\nseed = 20240601\n",
         "clt-check"},
    };
    for (const auto& c : cases) {
        std::string csv1, csv4;
        for (const unsigned threads : {1u, 4u}) {
            auto cfg = parse(c.text, c.kind);
            cfg.threads = threads;
            const auto report = expt::run_experiment(cfg);
            const std::string dir =
                "acceptance_out/determinism-" + c.name + "-t" + std::to_string(threads);
            expt::write_report_files(report, dir);
            (threads == 1 ? csv1 : csv4) = read_file(std::filesystem::path(dir) / "report.csv");
        }
        const bool same = !csv1.empty() && csv1 == csv4;
        o.pass = o.pass && same;
        o.detail += c.name + (same ? ": byte-identical; " : ": MISMATCH; ");
    }
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "moment identities", c1_moment_identities},
        {2, "universal inequalities", c2_universal_inequalities},
        {3, "increment law contract", c3_increment_law},
        {4, "CLT upper bound shape", c4_clt_upper},
        {5, "CLT lower bound", c5_clt_lower},
        {6, "coupling gap", c6_coupling_gap},
        {7, "Euler baseline rate", c7_euler_baseline},
        {8, "scheme strong-error rate", c8_scheme_rate},
        {9, "neglect-vs-Gaussian ordering", c9_neglect_vs_gauss},
        {10, "Brownian approximation rate", c10_brownian_approx},
        {11, "cost audit", c11_cost_audit},
        {12, "instrument validity", c12_instrument_validity},
        {13, "determinism across thread counts", c13_determinism},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] C%-2d %-34s (%6.1f s)  %s\n", outcome.pass ? "PASS" : "FAIL", c.id,
                    c.name, secs, outcome.detail.c_str());
        std::fflush(stdout);
        if (!outcome.pass) ++failures;
    }
    if (failures > 0) std::printf("%d criterion(s) FAILED\n", failures);
    else std::printf("all 13 criteria passed\n");
    return failures == 0 ? 0 : 1;
}
