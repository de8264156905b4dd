#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "levysim/errors.hpp"
#include "levysim/experiments/report.hpp"
#include "levysim/stats.hpp"

using namespace levysim;
using namespace levysim::experiments;

namespace {

RateReport sample_report() {
    RateReport r;
    r.experiment = "cost-audit";
    r.rows = {{16.0, 0.01, 0.002, 120.5}, {32.0, 0.005, 0.001, 250.25}};
    r.fitted_slope = -1.023;
    r.slope_ci = 0.04;
    r.slope_fitted = true;
    r.checks.push_back({"max_relative_cost_deviation", 0.01, "<=", 0.05, true});
    r.notes.push_back("empirical ceiling");
    r.pass = true;
    return r;
}

}  // namespace

TEST_CASE("csv rendering is deterministic and exact") {
    const auto r = sample_report();
    const std::string want =
        "param,error,ci,cost\n"
        "16,0.01,0.002,120.5\n"
        "32,0.005,0.001,250.25\n";
    CHECK(format_report_csv(r) == want);
    CHECK(format_report_csv(r) == format_report_csv(r));
}

TEST_CASE("slopes rendering carries checks and notes") {
    const auto text = format_slopes_txt(sample_report());
    CHECK(text.find("experiment = cost-audit") != std::string::npos);
    CHECK(text.find("fitted_slope = -1.023 +- 0.04") != std::string::npos);
    CHECK(text.find("check max_relative_cost_deviation: 0.01 <= 0.05 : PASS") !=
          std::string::npos);
    CHECK(text.find("note: empirical ceiling") != std::string::npos);
    CHECK(text.find("pass = true") != std::string::npos);
}

TEST_CASE("write_report_files produces the three artifacts (plus details when present)") {
    auto r = sample_report();
    r.details_header = {"n", "extra"};
    r.details_rows = {{16.0, 1.0}, {32.0, 2.0}};
    const auto dir = std::filesystem::temp_directory_path() / "levysim_report_test";
    std::filesystem::remove_all(dir);
    write_report_files(r, dir.string());
    CHECK(std::filesystem::exists(dir / "report.csv"));
    CHECK(std::filesystem::exists(dir / "slopes.txt"));
    CHECK(std::filesystem::exists(dir / "plot.gp"));
    CHECK(std::filesystem::exists(dir / "details.csv"));
    std::ifstream in(dir / "details.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "n,extra");
    std::filesystem::remove_all(dir);
}

TEST_CASE("log-log fit recovers exact power laws") {
    std::vector<double> x, y;
    for (int i = 1; i <= 6; ++i) {
        const double n = std::pow(2.0, i);
        x.push_back(n);
        y.push_back(3.0 * std::pow(n, -1.5));
    }
    const auto fit = fit_loglog(x, y);
    CHECK(fit.slope == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-10));
    CHECK(fit.slope_stderr == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("rate fits refuse to run on fewer than 5 grid points") {
    const std::vector<double> x{1.0, 2.0, 4.0, 8.0};
    const std::vector<double> y{1.0, 0.5, 0.25, 0.125};
    CHECK_THROWS_WITH_AS((void)fit_loglog(x, y), doctest::Contains("at least 5"), ConfigError);
    CHECK_THROWS_AS((void)fit_loglog({}, {}), ConfigError);
}

TEST_CASE("ols slope standard error on a noisy line") {
    // y = 2x + noise with known residuals
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0, 5.0};
    const std::vector<double> y{2.1, 3.9, 6.1, 7.9, 10.1};
    const auto fit = ols_fit(x, y);
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(0.02));
    CHECK(fit.slope_stderr > 0.0);
    CHECK(fit.slope_stderr < 0.1);
}
