#include <doctest.h>

#include <cmath>
#include <vector>

#include "levysim/errors.hpp"
#include "levysim/measure.hpp"
#include "quadrature.hpp"
#include "stats_oracles.hpp"

using namespace levysim;

namespace {

// Quadrature oracle for stable-like absolute moments: 2c * int z^{k-1-a} dz.
double stable_moment_quad(double alpha, double c, double R, double k, double eps_hi) {
    const double hi = std::min(eps_hi, R);
    if (hi <= 0.0) return 0.0;
    const double p = k - 1.0 - alpha;
    return 2.0 * c *
           testsupport::integrate_power_singular([p](double z) { return std::pow(z, p); }, hi, p);
}

double stable_band_quad(double alpha, double c, double R, double k, double lo, double hi) {
    hi = std::min(hi, R);
    if (hi <= lo) return 0.0;
    return 2.0 * c *
           testsupport::integrate([&](double z) { return std::pow(z, k - 1.0 - alpha); }, lo, hi,
                                  1e-13);
}

}  // namespace

TEST_CASE("two-point family: exact moments and masses") {
    const auto mu = LevyMeasureSpec::two_point(0.1);
    CHECK(mu.moment(2.0) == 1.0);          // m2 = 1 exactly
    CHECK(mu.moment(4.0) == doctest::Approx(0.01).epsilon(1e-15));  // m4 = eps0^2
    CHECK(mu.total_mass() == doctest::Approx(100.0));
    CHECK(mu.tail_mass(0.2) == 0.0);
    CHECK(mu.tail_mass(0.05) == doctest::Approx(100.0));
    // the atom at |z| = eps counts as small at eps = eps0 (closed half line)
    CHECK(mu.tail_mass(0.1) == 0.0);
    CHECK(mu.truncated_moment(2.0, 0.1) == 1.0);
    CHECK(mu.tail_signed_first_moment(0.05) == 0.0);
}

TEST_CASE("two-point delta_eps and its degenerate error") {
    const auto mu = LevyMeasureSpec::two_point(0.1);
    CHECK(mu.delta_eps(0.5) == doctest::Approx(0.01).epsilon(1e-15));
    CHECK_THROWS_AS((void)mu.delta_eps(0.05), DegenerateSmallJumpsError);
}

TEST_CASE("stable-like closed forms match the quadrature oracle") {
    const double alpha = 1.5, c = 1.0, R = 1.0;
    const auto nu = LevyMeasureSpec::stable(alpha, c, R);

    // tail mass at eps = 0.25: 2c (eps^-a - R^-a)/a = 2(8 - 1)/1.5
    CHECK(nu.tail_mass(0.25) == doctest::Approx(2.0 * 7.0 / 1.5).epsilon(1e-12));
    const double tail_quad =
        2.0 * c *
        testsupport::integrate([&](double z) { return std::pow(z, -1.0 - alpha); }, 0.25, R,
                               1e-13);
    CHECK(nu.tail_mass(0.25) == doctest::Approx(tail_quad).epsilon(1e-10));

    // truncated second moment: 2 eps^{2-a}/(2-a)
    for (const double eps : {0.1, 0.25, 0.7}) {
        CHECK(nu.truncated_moment(2.0, eps) ==
              doctest::Approx(2.0 * std::pow(eps, 0.5) / 0.5).epsilon(1e-12));
        CHECK(nu.truncated_moment(2.0, eps) ==
              doctest::Approx(stable_moment_quad(alpha, c, R, 2.0, eps)).epsilon(1e-8));
    }

    // delta_eps = ((2-a)/(4-a)) eps^2 = 0.2 eps^2 for alpha = 1.5
    for (const double eps : {0.05, 0.2, 0.9})
        CHECK(nu.delta_eps(eps) == doctest::Approx(0.2 * eps * eps).epsilon(1e-12));

    // eps beyond the cutoff: tail empties, truncation saturates
    CHECK(nu.tail_mass(1.5) == 0.0);
    CHECK(nu.truncated_moment(2.0, 1.5) == doctest::Approx(nu.moment(2.0)).epsilon(1e-15));
}

TEST_CASE("closed-form moments match quadrature across a parameter grid") {
    // 20-point grid over (alpha, k, eps); relative tolerance 1e-8
    const double alphas[] = {0.3, 0.8, 1.2, 1.7};
    const double orders[] = {2.0, 4.0, 6.5};
    std::size_t points = 0;
    for (const double alpha : alphas) {
        const auto nu = LevyMeasureSpec::stable(alpha, 0.7, 1.3);
        for (const double k : orders) {
            CHECK(nu.moment(k) ==
                  doctest::Approx(stable_moment_quad(alpha, 0.7, 1.3, k, 1.3)).epsilon(1e-8));
            const double eps = 0.2 + 0.1 * k;
            CHECK(nu.truncated_moment(k, eps) ==
                  doctest::Approx(stable_moment_quad(alpha, 0.7, 1.3, k, eps)).epsilon(1e-8));
            ++points;
        }
    }
    CHECK(points >= 12);

    // atom families: direct summation oracle
    const auto cp = LevyMeasureSpec::compound_poisson({{0.5, 2.0}, {-0.25, 1.0}, {1.5, 0.3}});
    for (const double k : orders) {
        double direct = 2.0 * std::pow(0.5, k) + 1.0 * std::pow(0.25, k) + 0.3 * std::pow(1.5, k);
        CHECK(cp.moment(k) == doctest::Approx(direct).epsilon(1e-14));
    }
    CHECK(cp.tail_signed_first_moment(0.4) == doctest::Approx(0.5 * 2.0 + 1.5 * 0.3));
    CHECK(cp.signed_first_moment() ==
          doctest::Approx(0.5 * 2.0 - 0.25 * 1.0 + 1.5 * 0.3).epsilon(1e-14));
}

TEST_CASE("universal inequalities and monotonicity on a family/eps grid") {
    std::vector<LevyMeasureSpec> specs;
    specs.push_back(LevyMeasureSpec::two_point(0.05));
    specs.push_back(LevyMeasureSpec::two_point(0.3));
    specs.push_back(LevyMeasureSpec::stable(0.5, 1.0, 1.0));
    specs.push_back(LevyMeasureSpec::stable(1.5, 2.0, 0.8));
    specs.push_back(LevyMeasureSpec::stable(1.9, 0.4, 1.0));
    specs.push_back(LevyMeasureSpec::compound_poisson({{0.5, 2.0}, {-0.125, 8.0}}));

    for (const auto& nu : specs) {
        const double m2 = nu.moment(2.0);
        double prev_trunc = -1.0;
        double prev_tail = std::numeric_limits<double>::infinity();
        for (int i = 1; i <= 20; ++i) {
            const double eps = 0.05 * i;
            // delta_eps <= eps^2 whenever defined
            bool defined = true;
            double de = 0.0;
            try {
                de = nu.delta_eps(eps);
            } catch (const DegenerateSmallJumpsError&) {
                defined = false;
            }
            if (defined) CHECK(de <= eps * eps * (1.0 + 1e-12));
            // F_eps <= eps^-2 m2
            CHECK(nu.tail_mass(eps) <= m2 / (eps * eps) * (1.0 + 1e-12));
            // monotonicity in eps
            const double trunc = nu.truncated_moment(2.0, eps);
            const double tail = nu.tail_mass(eps);
            CHECK(trunc >= prev_trunc);
            CHECK(tail <= prev_tail);
            prev_trunc = trunc;
            prev_tail = tail;
            // consistency: m_{k,eps} + tail part = m_k
            for (const double k : {2.0, 4.0}) {
                const double lo = nu.truncated_moment(k, eps);
                const double full = nu.moment(k);
                double tail_k;
                if (nu.is_stable()) {
                    const auto& st = std::get<TruncatedStableLike>(nu.family());
                    tail_k = stable_band_quad(st.alpha, st.scale, st.cutoff, k, eps, st.cutoff);
                } else {
                    tail_k = full - lo;  // atom families: exact by summation
                }
                CHECK(lo + tail_k == doctest::Approx(full).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("moment query validation") {
    const auto nu = LevyMeasureSpec::stable(1.5, 1.0, 1.0);
    CHECK_THROWS_AS((void)nu.moment(MomentQuery{1.0, std::nullopt}), ConfigError);
    CHECK_THROWS_AS((void)nu.moment(MomentQuery{2.0, 0.0}), ConfigError);
    CHECK_THROWS_AS((void)LevyMeasureSpec::stable(2.0, 1.0, 1.0), ConfigError);
    CHECK_THROWS_AS((void)LevyMeasureSpec::two_point(0.0), ConfigError);
    CHECK_THROWS_AS((void)LevyMeasureSpec::compound_poisson({{0.0, 1.0}}), ConfigError);
}

TEST_CASE("two-point tail sampling: sign frequency within 3 sigma") {
    const auto mu = LevyMeasureSpec::two_point(0.1);
    Engine eng = make_engine(2024, 1);
    const std::size_t m = 100000;
    std::size_t plus = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double v = mu.sample_large_jump(0.05, eng);
        CHECK(std::fabs(v) == doctest::Approx(0.1));
        if (v > 0.0) ++plus;
    }
    const double se = std::sqrt(0.25 * static_cast<double>(m));
    CHECK(std::fabs(static_cast<double>(plus) - 0.5 * m) <= 3.0 * se);
    CHECK_THROWS_AS((void)mu.sample_large_jump(0.2, eng), EmptyTailError);
}

TEST_CASE("stable tail sampling: mean magnitude and chi-squared fit") {
    const double alpha = 1.5, c = 1.0, R = 1.0, eps = 0.25;
    const auto nu = LevyMeasureSpec::stable(alpha, c, R);
    Engine eng = make_engine(2025, 1);
    const std::size_t m = 100000;
    const double tail = nu.tail_mass(eps);

    std::vector<double> mags(m);
    for (auto& v : mags) v = std::fabs(nu.sample_large_jump(eps, eng));

    // mean |value| against the quadrature oracle, 3 sigma
    const double mean_expect =
        2.0 * c *
        testsupport::integrate([&](double z) { return z * std::pow(z, -1.0 - alpha); }, eps, R,
                               1e-13) /
        tail;
    CHECK(std::fabs(testsupport::mean(mags) - mean_expect) <= 3.0 * testsupport::se_mean(mags));

    // chi-squared on 20 equal-probability magnitude bins at level 0.001
    const double lo_pow = std::pow(eps, -alpha), hi_pow = std::pow(R, -alpha);
    std::vector<double> edges;
    for (int b = 1; b < 20; ++b) {
        const double u = b / 20.0;
        edges.push_back(std::pow(lo_pow - u * (lo_pow - hi_pow), -1.0 / alpha));
    }
    std::vector<double> observed(20, 0.0), expected(20, static_cast<double>(m) / 20.0);
    for (const double v : mags) {
        std::size_t b = std::lower_bound(edges.begin(), edges.end(), v) - edges.begin();
        observed[b] += 1.0;
    }
    CHECK(testsupport::chi2_statistic(observed, expected) <= testsupport::chi2_crit_999(19));
}

TEST_CASE("compound-Poisson tail sampling: categorical chi-squared fit") {
    const auto nu = LevyMeasureSpec::compound_poisson({{0.5, 2.0}, {-0.8, 1.0}, {1.5, 0.5}});
    Engine eng = make_engine(2026, 1);
    const std::size_t m = 100000;
    const double eps = 0.4;  // all three atoms are in the tail
    double n_a = 0, n_b = 0, n_c = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double v = nu.sample_large_jump(eps, eng);
        if (v == 0.5) ++n_a;
        else if (v == -0.8) ++n_b;
        else if (v == 1.5) ++n_c;
        else FAIL("unexpected atom");
    }
    const double total = 3.5;
    const std::vector<double> observed{n_a, n_b, n_c};
    const std::vector<double> expected{m * 2.0 / total, m * 1.0 / total, m * 0.5 / total};
    CHECK(testsupport::chi2_statistic(observed, expected) <= testsupport::chi2_crit_999(2));
}

TEST_CASE("zero measure") {
    const auto none = LevyMeasureSpec::none();
    CHECK(none.total_mass() == 0.0);
    CHECK(none.moment(2.0) == 0.0);
    CHECK(none.tail_mass(0.1) == 0.0);
    CHECK_THROWS_AS((void)none.delta_eps(0.5), DegenerateSmallJumpsError);
    Engine eng = make_engine(1, 1);
    CHECK_THROWS_AS((void)none.sample_full_jump(eng), EmptyTailError);
}
