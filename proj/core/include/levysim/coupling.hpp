#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "levysim/euler.hpp"
#include "levysim/increments.hpp"
#include "levysim/measure.hpp"
#include "levysim/rng.hpp"

namespace levysim {

/// Discrete CDF used for the distributional transform, built either from an
/// empirical sample (equal weights) or from an exact atomic law.
///
/// rank_uniform maps a value to a uniform rank: a singleton empirical
/// observation maps to its midpoint plotting position (i + 0.5)/M; a tied
/// block (or exact atom) is jittered uniformly across the block's whole
/// probability interval, which preserves the target marginal exactly for
/// atomic laws; a value not present in the support maps deterministically to
/// the probability mass strictly below it.
class EmpiricalCdf {
public:
    static EmpiricalCdf from_samples(std::vector<double> samples);
    /// Atoms as (value, probability); need not be sorted or normalized.
    static EmpiricalCdf from_atoms(std::vector<std::pair<double, double>> atoms);

    std::size_t block_count() const { return values_.size(); }
    std::size_t sample_count() const { return sample_count_; }

    /// Uniform rank of v; jitter must be a fresh U[0,1) draw.
    double rank_uniform(double v, double jitter) const;
    /// Probability mass strictly below v.
    double prob_below(double v) const;

    const std::vector<double>& block_values() const { return values_; }
    const std::vector<double>& block_probs() const { return probs_; }

    /// Empty cdf; only useful as a placeholder before assignment.
    EmpiricalCdf() = default;

private:
    std::vector<double> values_;      // strictly increasing block values
    std::vector<double> cum_before_;  // mass strictly below values_[i]
    std::vector<double> probs_;      // mass of block i
    std::vector<bool> jittered_;     // whether block i takes the jitter path
    std::size_t sample_count_ = 0;
};

/// Comonotone (quantile) coupling of samples to N(target_mean, target_std^2):
/// g = mean + std * Phi^-1(rank_u(s)). This is the W2-optimal coupling of the
/// cdf's law with the Gaussian in one dimension. The engine only feeds the
/// tie-breaking jitter.
std::vector<double> quantile_couple_to_gaussian(std::span<const double> samples,
                                                double target_mean, double target_std,
                                                const EmpiricalCdf& cdf, Engine& eng);

/// Exact law of scale * (P1 - P2), P1 and P2 independent Poisson(lambda):
/// the compensated sum of symmetric two-point jumps over one window. The pmf
/// is obtained by direct summation, truncated to total tail mass <= tail_cut
/// and renormalized.
EmpiricalCdf skellam_scaled_law(double scale, double lambda, double tail_cut = 1e-12);

/// Exact law of the compensated atom-sum over one window: enumerates the
/// product of truncated per-atom Poisson counts. Throws Error if the
/// enumeration would exceed ~5e6 states.
EmpiricalCdf compound_poisson_sum_law(std::span<const PoissonAtom> atoms, double window,
                                      double tail_cut = 1e-12);

/// Exact law of the compensated small-jump sum over a 1/n window (jumps with
/// |z| <= eps_cut; pass +infinity for the whole jump part). Throws
/// FiniteSmallActivityError for the stable-like family.
EmpiricalCdf small_jump_sum_law(const LevyTriplet& triplet, std::int64_t n, double eps_cut,
                               double tail_cut = 1e-12);

/// Draws the compensated small-jump sum, window by window. For the two-point
/// and atom families the accumulated state is integer-valued and
/// canonical_value reproduces the law atoms bit-exactly; for the stable-like
/// family the sum is simulated through a documented inner-truncation layer
/// (jumps in (eps/factor, eps] exact, the remainder replaced by its
/// compensating Gaussian).
class SmallSumSampler {
public:
    struct State {
        std::int64_t skellam_diff = 0;
        std::vector<std::int64_t> atom_counts;
        double continuous_sum = 0.0;
        std::uint32_t jumps = 0;
    };

    SmallSumSampler(const LevyTriplet& triplet, double eps_cut,
                    std::int64_t fine_windows_per_unit, std::int64_t coarse_windows_per_unit,
                    std::optional<double> inner_truncation_factor);

    State make_state() const;
    void reset(State& state) const;
    /// One fine-window draw; returns the window's compensated sum.
    double draw_window(State& state, Engine& eng) const;
    /// Value of the accumulated coarse sum, bit-matching the law's atoms.
    double canonical_value(const State& state) const;

    bool exact() const { return exact_; }
    /// Coarse-law builder (exact families only).
    EmpiricalCdf law(double tail_cut = 1e-12) const;
    double coarse_variance() const { return coarse_variance_; }

private:
    enum class Mode { TwoPoint, Atoms, StableInner, Zero };
    Mode mode_ = Mode::Zero;
    bool exact_ = true;
    double eps_cut_ = 0.0;
    std::int64_t fine_n_ = 1;
    std::int64_t coarse_n_ = 1;
    double coarse_variance_ = 0.0;
    // two-point
    double scale_ = 0.0;
    PoissonSampler fine_atom_count_{0.0};
    double coarse_lambda_ = 0.0;
    // atoms
    std::vector<PoissonAtom> small_atoms_;
    std::vector<PoissonSampler> fine_atom_counts_;
    double coarse_compensator_ = 0.0;
    double fine_compensator_ = 0.0;
    // stable inner truncation
    double inner_eps_ = 0.0;
    double band_lo_pow_ = 0.0, band_hi_pow_ = 0.0, inv_alpha_neg_ = 0.0;
    PoissonSampler fine_band_count_{0.0};
    double fine_inner_gauss_std_ = 0.0;
};

/// Coupled pair of increment families sharing drift, Brownian part and tail
/// jumps: delta_exact follows the exact increment law, delta_approx the
/// Gaussian-compensated scheme law, and the gap between them is the
/// quantile-coupling gap of the small-jump sum.
struct CoupledIncrementBatch {
    std::vector<double> delta_exact;
    std::vector<double> delta_approx;
    std::vector<std::uint32_t> jump_counts;  // shared tail-jump counts
};

/// Lockstep generator for coupled (exact, scheme) increments, optionally with
/// a shared-noise refinement: each coarse step of size 1/n can also emit the
/// refine fine exact increments (step 1/(refine*n)) whose sum is the coarse
/// exact increment, so a reference path can be driven by the same noise.
class CoupledSchemeKernel {
public:
    struct Options {
        std::int64_t n = 1;
        double eps_cut = 0.5;  // +infinity couples the whole jump part
        int refine = 1;
        std::optional<double> inner_truncation_factor;
        std::size_t law_samples = 100000;  // empirical-law size (stable-like only)
        double law_tail_cut = 1e-12;
    };

    /// Builds the small-sum law internally; law_eng is consumed only by the
    /// empirical layer for the stable-like family.
    CoupledSchemeKernel(const LevyTriplet& triplet, const Options& opt, Engine& law_eng);
    /// Caller-supplied small-sum law.
    CoupledSchemeKernel(const LevyTriplet& triplet, const Options& opt, EmpiricalCdf small_law);

    struct Step {
        double coarse_exact = 0.0;
        double coarse_approx = 0.0;
        double small_sum = 0.0;    // S, the compensated small-jump sum
        double small_gauss = 0.0;  // G, its quantile-coupled Gaussian
        std::uint32_t tail_jumps = 0;
        std::uint32_t small_jumps = 0;  // inner-layer jump count (cost accounting)
    };

    /// One coarse step. fine_out must be empty or have size refine; when
    /// given, it receives the fine exact increments.
    Step step(Engine& eng, std::span<double> fine_out = {});

    bool approximate_small_law() const { return !small_sampler_.exact(); }
    double small_gauss_std() const { return small_gauss_std_; }
    const EmpiricalCdf& small_law() const { return law_; }
    const Options& options() const { return opt_; }

private:
    void init(const LevyTriplet& triplet);
    LevyTriplet triplet_;
    Options opt_;
    SmallSumSampler small_sampler_;
    SmallSumSampler::State state_;
    EmpiricalCdf law_;
    double fine_drift_ = 0.0;
    double fine_brown_std_ = 0.0;
    double fine_tail_comp_ = 0.0;
    double small_gauss_std_ = 0.0;
    bool has_tail_ = false;
    PoissonSampler fine_tail_count_{0.0};
};

/// Coupled (exact increment, scheme increment) pairs per the construction
/// above. small_jump_cdf must describe the law of the compensated small-jump
/// sum over a 1/n window (see small_jump_sum_law). Throws
/// FiniteSmallActivityError for the stable-like family unless inner_truncation
/// is supplied, in which case the documented approximation layer is used.
CoupledIncrementBatch sample_coupled_increment(const LevyTriplet& triplet, std::int64_t n,
                                               double eps, std::size_t count,
                                               const EmpiricalCdf& small_jump_cdf, Engine& eng,
                                               std::optional<double> inner_truncation = {});

/// Couples the full increment of the driving process to the increment of its
/// moment-matched Brownian driver a/n + sqrt(b^2 + m2) W_{1/n}: drift and
/// Brownian part are shared, the compensated jump part is quantile-coupled to
/// N(0, m2/n) through increment_cdf (see small_jump_sum_law with
/// eps_cut = +infinity).
CoupledIncrementBatch sample_coupled_brownian_increment(const LevyTriplet& triplet,
                                                        std::int64_t n, std::size_t count,
                                                        const EmpiricalCdf& increment_cdf,
                                                        Engine& eng);

/// Feeds delta_exact and delta_approx through two Euler recursions in
/// lockstep and returns both grids.
std::pair<PathGrid, PathGrid> simulate_coupled_paths(double x0, const SigmaFn& sigma,
                                                     const CoupledIncrementBatch& coupled,
                                                     std::int64_t n, double horizon);

}  // namespace levysim
