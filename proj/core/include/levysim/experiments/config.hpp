#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levysim/euler.hpp"
#include "levysim/increments.hpp"

namespace levysim::experiments {

enum class ExperimentKind {
    CltCheck,
    CltLowerBound,
    SchemeRate,
    EulerBaseline,
    NeglectVsGauss,
    BrownianApprox,
    CostAudit,
};

const char* to_string(ExperimentKind kind);
std::optional<ExperimentKind> experiment_from_string(const std::string& name);
std::vector<ExperimentKind> all_experiments();

/// Parsed, validated experiment configuration.
///
/// The config format is flat key = value text with one [section] per
/// experiment; unknown keys and unknown section names are hard errors. Grids
/// are comma-separated, nonempty and strictly monotone. paths >= 1000 is
/// enforced everywhere since every experiment makes statistical assertions.
/// Pass/fail thresholds are ordinary config keys so reports can echo them.
struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::CostAudit;

    // driving process (path experiments)
    LevyTriplet triplet;
    std::string family;  // two-point | stable | compound-poisson | none
    SigmaFn sigma = sigma_constant(1.0);
    double x0 = 0.0;
    double horizon = 1.0;

    std::size_t paths = 10000;
    std::uint64_t seed = 1;
    std::string out_dir;
    std::optional<unsigned> threads;
    int bootstrap = 200;

    // grids
    std::vector<std::int64_t> n_grid;
    std::vector<double> eps0_grid;
    std::vector<double> t_grid;      // absolute t values
    std::vector<double> t_rel_grid;  // multiples of eps0^2
    std::vector<double> eps_grid;
    std::vector<double> slope_eps0_grid;
    std::vector<double> profile_t_rel_grid;
    double profile_eps0 = 0.1;

    // scheme-rate mode and eps selection
    std::string mode = "path-rate";  // or "increment-gap"
    std::string eps_rule;            // "one-over-n" or "" (explicit eps)
    double eps = 0.0;
    std::int64_t n_fixed = 0;

    // knobs
    int refine = 64;
    double inner_factor = 64.0;
    std::size_t cdf_samples = 100000;
    double p_moment = 8.0;
    int dump_paths = 0;
    int dump_increments = 0;

    // config-visible pass thresholds
    double cap_c = 5.0;
    double floor_c = 0.01;
    double gap_cap_c = 5.0;
    double slope_target = 0.0;
    double slope_tol = 0.3;
    double slope_max = -0.65;
    double slope_min = 0.75;
    double cost_rel_tol = 0.05;
    double exponent_target = 0.0;  // 0: derive from the family
    double exponent_tol = 0.15;
};

/// Parses the [experiment] section of a config file. Section names must be
/// valid experiment names; only the requested section's keys are consumed.
ExperimentConfig parse_config_file(const std::string& path, ExperimentKind experiment);
ExperimentConfig parse_config_text(const std::string& text, ExperimentKind experiment);

/// CLI-level overrides (win over the config file).
void apply_overrides(ExperimentConfig& cfg, std::optional<std::uint64_t> seed,
                     std::optional<std::string> out_dir, std::optional<unsigned> threads);

}  // namespace levysim::experiments
