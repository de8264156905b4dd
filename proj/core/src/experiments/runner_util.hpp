#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include "levysim/experiments/config.hpp"
#include "levysim/experiments/report.hpp"
#include "levysim/parallel.hpp"
#include "levysim/rng.hpp"
#include "levysim/stats.hpp"
#include "levysim/wasserstein.hpp"

namespace levysim::experiments::detail {

// Substream purposes; combined with (grid-point, path/chunk) coordinates all
// randomness is a pure function of the master seed and task indices.
enum SeedPurpose : std::uint64_t {
    kSimStream = 1,
    kLawStream = 2,
    kBootStream = 3,
    kJitterStream = 4,
};

inline BootstrapSpec bootstrap_spec(const ExperimentConfig& cfg, std::uint64_t point) {
    return BootstrapSpec{cfg.bootstrap, derive_seed(cfg.seed, kBootStream, point)};
}

inline double bootstrap_ci_for_point(const ExperimentConfig& cfg, std::uint64_t point,
                                     std::span<const double> values) {
    Engine eng = make_engine(cfg.seed, kBootStream, point);
    return bootstrap_mean_ci(values, cfg.bootstrap, eng);
}

inline CheckLine check_le(std::string name, double value, double threshold) {
    return CheckLine{std::move(name), value, "<=", threshold, value <= threshold};
}

inline CheckLine check_ge(std::string name, double value, double threshold) {
    return CheckLine{std::move(name), value, ">=", threshold, value >= threshold};
}

inline CheckLine check_within(std::string name, double value, double center, double tol) {
    char rel[48];
    std::snprintf(rel, sizeof(rel), "within %.4g of", tol);
    CheckLine c{std::move(name), value, rel, center, false};
    c.pass = std::fabs(value - center) <= tol;
    return c;
}

inline bool all_pass(const std::vector<CheckLine>& checks) {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

// Fixed-size chunking: the decomposition depends only on the workload, never
// on the worker count, so reductions in chunk order are reproducible.
struct ChunkPlan {
    std::size_t chunk_size;
    std::size_t count;  // number of chunks
    std::size_t begin(std::size_t chunk) const { return chunk * chunk_size; }
    std::size_t end(std::size_t chunk, std::size_t total) const {
        return std::min(total, (chunk + 1) * chunk_size);
    }
};

inline ChunkPlan plan_chunks(std::size_t total, std::size_t chunk_size) {
    return ChunkPlan{chunk_size, (total + chunk_size - 1) / chunk_size};
}

}  // namespace levysim::experiments::detail

namespace levysim::experiments {
// scheme-rate dispatch targets (run_increments.cpp / run_paths.cpp)
RateReport run_scheme_rate_increment_gap(const ExperimentConfig& cfg);
RateReport run_scheme_rate_paths(const ExperimentConfig& cfg);
}  // namespace levysim::experiments
