#pragma once

#include <cstdint>
#include <vector>

#include "levysim/measure.hpp"
#include "levysim/rng.hpp"

namespace levysim {

/// Driving process: drift a, Brownian coefficient b >= 0, jump measure nu
/// with finite second moment.
struct LevyTriplet {
    double drift = 0.0;
    double brownian = 0.0;
    LevyMeasureSpec measure = LevyMeasureSpec::none();
};

/// Derived per-(n, eps) quantities for the approximate increment laws. All
/// fields are recomputed by make_params from closed-form moments; nothing is
/// cached across parameter changes.
///
/// eps is nominally in (0, 1); larger values are accepted and use the same
/// formulas (the tail simply empties out as eps grows).
struct IncrementParams {
    LevyTriplet triplet;
    std::int64_t n = 1;    // steps per unit time
    double eps = 0.5;      // large-jump truncation level
    double drift_term = 0.0;        // (a - tail signed first moment) / n
    double gauss_std = 0.0;         // sqrt((b^2 + m_{2,eps}) / n)
    double neglect_gauss_std = 0.0; // b / sqrt(n)
    double small_jump_var = 0.0;    // m_{2,eps} / n
    double poisson_mean = 0.0;      // F_eps / n
    bool degenerate_small_jumps = false;  // m_{2,eps} == 0
};

enum class IncrementKind { Exact, Neglect, GaussCompensated };

/// i.i.d. samples of one increment law together with the number of simulated
/// jumps per sample (the per-increment simulation cost beyond the O(1) part).
struct IncrementBatch {
    IncrementKind kind = IncrementKind::GaussCompensated;
    std::vector<double> values;
    std::vector<std::uint32_t> jump_counts;
};

/// Computes all derived fields from closed-form moments. When there is no
/// jump mass at or below eps the Gaussian std falls back to b/sqrt(n) and the
/// batch samplers proceed without small-jump compensation (flagged in
/// degenerate_small_jumps).
IncrementParams make_params(const LevyTriplet& triplet, std::int64_t n, double eps);

/// Samples of the Gaussian-compensated increment: drift term + one Gaussian
/// carrying both the Brownian part and the small-jump variance + exactly
/// simulated large jumps (Poisson count, normalized tail law).
IncrementBatch sample_gauss_compensated(const IncrementParams& params, std::size_t count,
                                        Engine& eng);

/// Samples of the jump-neglecting increment: same drift term and large jumps
/// but the Gaussian carries only the Brownian variance b^2/n.
IncrementBatch sample_neglect(const IncrementParams& params, std::size_t count, Engine& eng);

/// Samples of the exact increment for finite-activity measures:
/// a/n + b G/sqrt(n) + (compound-Poisson sum over a 1/n window) - compensator.
/// Throws InfiniteActivityError for the stable-like family.
IncrementBatch sample_exact(const LevyTriplet& triplet, std::int64_t n, std::size_t count,
                            Engine& eng);

/// Streaming one-draw-at-a-time variants of the batch samplers, for path
/// loops that do not want to materialize increment arrays.
class ApproxIncrementSampler {
public:
    ApproxIncrementSampler(const IncrementParams& params, IncrementKind kind);
    double draw(Engine& eng, std::uint32_t& jumps_out) const;
    const IncrementParams& params() const { return params_; }

private:
    IncrementParams params_;
    double gauss_std_;
    PoissonSampler tail_count_;
    bool has_tail_;
};

class ExactIncrementSampler {
public:
    ExactIncrementSampler(const LevyTriplet& triplet, std::int64_t n);
    double draw(Engine& eng, std::uint32_t& jumps_out) const;

private:
    LevyTriplet triplet_;
    double drift_;
    double gauss_std_;
    double compensator_;
    PoissonSampler jump_count_;
    bool has_jumps_;
};

namespace detail {
/// Sum of tail jumps (|z| > eps) over a time window, plus their count.
/// The compensator is NOT subtracted here; callers carry it in the drift term.
double draw_tail_jump_sum(const LevyMeasureSpec& measure, double eps,
                          const PoissonSampler& count_law, Engine& eng, std::uint32_t& count_out);
}  // namespace detail

}  // namespace levysim
