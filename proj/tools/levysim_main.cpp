// levysim CLI: batch experiment harness.
//
//   levysim <experiment> --config <path> [--seed N] [--out DIR] [--threads K]
//
// Exit codes: 0 all assertions passed, 2 an assertion failed, 1 config or
// usage error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "levysim/errors.hpp"
#include "levysim/experiments/config.hpp"
#include "levysim/experiments/report.hpp"
#include "levysim/experiments/runners.hpp"

namespace expt = levysim::experiments;

int main(int argc, char** argv) {
    CLI::App app{"levysim: Levy-driven SDE simulation experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<unsigned> threads;

    for (const auto kind : expt::all_experiments()) {
        auto* sub = app.add_subcommand(expt::to_string(kind), "run this experiment");
        sub->add_option("--config", config_path, "experiment config file")->required();
        sub->add_option("--seed", seed, "master seed (overrides the config)");
        sub->add_option("--out", out_dir, "output directory (overrides the config)");
        sub->add_option("--threads", threads,
                        "worker threads (overrides LEVYSIM_THREADS and the config)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    const std::string sub_name = app.get_subcommands().front()->get_name();
    const auto kind = expt::experiment_from_string(sub_name);
    if (!kind) {
        std::cerr << "unknown experiment: " << sub_name << "\n";
        return 1;
    }

    try {
        auto cfg = expt::parse_config_file(config_path, *kind);
        expt::apply_overrides(cfg, seed, out_dir, threads);
        const auto report = expt::run_experiment(cfg);
        expt::write_report_files(report, cfg.out_dir);
        std::cout << expt::format_slopes_txt(report);
        std::cout << "wrote " << cfg.out_dir << "/report.csv\n";
        return report.pass ? 0 : 2;
    } catch (const levysim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
