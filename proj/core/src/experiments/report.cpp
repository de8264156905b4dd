#include "levysim/experiments/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "levysim/errors.hpp"

namespace levysim::experiments {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot write " + p.string());
    out << content;
}

}  // namespace

std::string format_report_csv(const RateReport& report) {
    std::string s = "param,error,ci,cost\n";
    for (const auto& r : report.rows)
        s += num(r.param) + "," + num(r.error) + "," + num(r.ci_half_width) + "," + num(r.cost) +
             "\n";
    return s;
}

std::string format_details_csv(const RateReport& report) {
    std::string s;
    for (std::size_t i = 0; i < report.details_header.size(); ++i)
        s += (i ? "," : "") + report.details_header[i];
    s += "\n";
    for (const auto& row : report.details_rows) {
        for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + num(row[i]);
        s += "\n";
    }
    return s;
}

std::string format_slopes_txt(const RateReport& report) {
    std::ostringstream s;
    s << "experiment = " << report.experiment << "\n";
    if (report.slope_fitted) {
        s << "fitted_slope = " << num(report.fitted_slope) << " +- " << num(report.slope_ci)
          << "\n";
    } else {
        s << "fitted_slope = n/a\n";
    }
    for (const auto& c : report.checks) {
        s << "check " << c.name << ": " << num(c.value) << " " << c.relation << " "
          << num(c.threshold) << " : " << (c.pass ? "PASS" : "FAIL") << "\n";
    }
    for (const auto& n : report.notes) s << "note: " << n << "\n";
    s << "pass = " << (report.pass ? "true" : "false") << "\n";
    return s.str();
}

std::string format_plot_gp(const RateReport& report) {
    std::ostringstream s;
    s << "# gnuplot script; run from the report directory\n";
    s << "set datafile separator ','\n";
    s << "set logscale xy\n";
    s << "set xlabel 'param'\n";
    s << "set ylabel 'error'\n";
    s << "set title '" << report.experiment;
    if (report.slope_fitted)
        s << " (fitted slope " << num(report.fitted_slope) << " +- " << num(report.slope_ci)
          << ")";
    s << "'\n";
    s << "plot 'report.csv' using 1:2:3 with yerrorlines title columnheader(2)";
    if (!report.details_header.empty()) s << ", \\\n     1/0 title 'see details.csv'";
    s << "\n";
    return s.str();
}

void write_report_files(const RateReport& report, const std::string& out_dir) {
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / "report.csv", format_report_csv(report));
    write_file(dir / "slopes.txt", format_slopes_txt(report));
    write_file(dir / "plot.gp", format_plot_gp(report));
    if (!report.details_header.empty())
        write_file(dir / "details.csv", format_details_csv(report));
}

}  // namespace levysim::experiments
