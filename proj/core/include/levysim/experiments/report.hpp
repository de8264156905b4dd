#pragma once

#include <string>
#include <vector>

namespace levysim::experiments {

/// One grid point of an experiment.
struct ReportRow {
    double param = 0.0;
    double error = 0.0;
    double ci_half_width = 0.0;
    double cost = 0.0;
};

/// One named pass/fail assertion, echoed into slopes.txt.
struct CheckLine {
    std::string name;
    double value = 0.0;
    std::string relation;  // "<=", ">=", "within"
    double threshold = 0.0;
    bool pass = false;
};

/// Per-experiment result: the primary grid (param, error, ci, cost), the
/// fitted log-log slope with its regression CI, the list of threshold
/// checks, free-form notes (approximation layers, fit conventions), and an
/// optional details table for curves that do not fit the four-column format.
struct RateReport {
    std::string experiment;
    std::vector<ReportRow> rows;
    double fitted_slope = 0.0;
    double slope_ci = 0.0;
    bool slope_fitted = false;
    std::vector<CheckLine> checks;
    std::vector<std::string> notes;
    std::vector<std::string> details_header;
    std::vector<std::vector<double>> details_rows;
    bool pass = false;
};

/// Deterministic text renderings (fixed %.12g formatting, fixed order), so
/// identical results produce byte-identical files.
std::string format_report_csv(const RateReport& report);
std::string format_slopes_txt(const RateReport& report);
std::string format_plot_gp(const RateReport& report);
std::string format_details_csv(const RateReport& report);

/// Writes report.csv, slopes.txt, plot.gp (and details.csv when present)
/// under out_dir, creating directories as needed.
void write_report_files(const RateReport& report, const std::string& out_dir);

}  // namespace levysim::experiments
