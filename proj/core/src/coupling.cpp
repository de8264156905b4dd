#include "levysim/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "levysim/errors.hpp"
#include "levysim/normal.hpp"

namespace levysim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Canonical compensated atom-sum value: fixed evaluation order so that
// simulated draws and enumerated law atoms agree bit for bit.
double cp_sum_value(std::span<const std::int64_t> counts, std::span<const PoissonAtom> atoms,
                    double compensator) {
    double v = 0.0;
    for (std::size_t j = 0; j < atoms.size(); ++j)
        v += static_cast<double>(counts[j]) * atoms[j].location;
    return v - compensator;
}

// Truncated Poisson pmf on [klo, khi]; the retained window keeps the missing
// tail around 1e-22, far below every advertised law truncation.
struct TruncatedPoissonPmf {
    std::int64_t klo = 0;
    std::vector<double> pmf;
};

TruncatedPoissonPmf truncated_poisson_pmf(double lambda) {
    TruncatedPoissonPmf out;
    if (lambda <= 0.0) {
        out.pmf = {1.0};
        return out;
    }
    const double sd = std::sqrt(lambda);
    const double halfwidth = 10.0 * sd + 30.0;
    out.klo = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(lambda - halfwidth)));
    const auto khi = static_cast<std::int64_t>(std::ceil(lambda + halfwidth));
    const double loglam = std::log(lambda);
    out.pmf.resize(static_cast<std::size_t>(khi - out.klo) + 1);
    for (std::size_t i = 0; i < out.pmf.size(); ++i) {
        const double k = static_cast<double>(out.klo + static_cast<std::int64_t>(i));
        out.pmf[i] = std::exp(k * loglam - lambda - std::lgamma(k + 1.0));
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// EmpiricalCdf
// ---------------------------------------------------------------------------

EmpiricalCdf EmpiricalCdf::from_samples(std::vector<double> samples) {
    if (samples.empty()) throw EmptyCdfError("cannot build a cdf from zero samples");
    std::sort(samples.begin(), samples.end());
    EmpiricalCdf cdf;
    cdf.sample_count_ = samples.size();
    const double w = 1.0 / static_cast<double>(samples.size());
    std::size_t i = 0;
    double cum = 0.0;
    while (i < samples.size()) {
        std::size_t j = i;
        while (j < samples.size() && samples[j] == samples[i]) ++j;
        const auto run = static_cast<double>(j - i);
        cdf.values_.push_back(samples[i]);
        cdf.cum_before_.push_back(cum);
        cdf.probs_.push_back(run * w);
        cdf.jittered_.push_back(j - i > 1);
        cum += run * w;
        i = j;
    }
    return cdf;
}

EmpiricalCdf EmpiricalCdf::from_atoms(std::vector<std::pair<double, double>> atoms) {
    if (atoms.empty()) throw EmptyCdfError("cannot build a cdf from zero atoms");
    std::sort(atoms.begin(), atoms.end());
    double total = 0.0;
    for (const auto& [v, p] : atoms) {
        if (p < 0.0) throw ConfigError("cdf atom probabilities must be nonnegative");
        total += p;
    }
    if (total <= 0.0) throw EmptyCdfError("cdf atoms carry no mass");
    EmpiricalCdf cdf;
    cdf.sample_count_ = atoms.size();
    double cum = 0.0;
    std::size_t i = 0;
    while (i < atoms.size()) {
        std::size_t j = i;
        double mass = 0.0;
        while (j < atoms.size() && atoms[j].first == atoms[i].first) mass += atoms[j++].second;
        if (mass > 0.0) {
            cdf.values_.push_back(atoms[i].first);
            cdf.cum_before_.push_back(cum);
            cdf.probs_.push_back(mass / total);
            cdf.jittered_.push_back(true);
            cum += mass / total;
        }
        i = j;
    }
    return cdf;
}

double EmpiricalCdf::rank_uniform(double v, double jitter) const {
    const auto it = std::lower_bound(values_.begin(), values_.end(), v);
    const auto idx = static_cast<std::size_t>(it - values_.begin());
    if (it == values_.end() || *it != v) {
        // Not in the support: mass strictly below, no jitter.
        return idx == 0 ? 0.0 : cum_before_[idx - 1] + probs_[idx - 1];
    }
    if (jittered_[idx]) return cum_before_[idx] + jitter * probs_[idx];
    return cum_before_[idx] + 0.5 * probs_[idx];
}

double EmpiricalCdf::prob_below(double v) const {
    const auto it = std::lower_bound(values_.begin(), values_.end(), v);
    const auto idx = static_cast<std::size_t>(it - values_.begin());
    return idx == 0 ? 0.0 : cum_before_[idx - 1] + probs_[idx - 1];
}

std::vector<double> quantile_couple_to_gaussian(std::span<const double> samples,
                                                double target_mean, double target_std,
                                                const EmpiricalCdf& cdf, Engine& eng) {
    if (cdf.block_count() == 0) throw EmptyCdfError("quantile coupling needs a nonempty cdf");
    if (target_std < 0.0) throw ConfigError("target std must be nonnegative");
    std::vector<double> out(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double u = cdf.rank_uniform(samples[i], uniform_open(eng));
        out[i] = target_mean + target_std * inv_norm_cdf(u);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Exact small-sum laws
// ---------------------------------------------------------------------------

EmpiricalCdf skellam_scaled_law(double scale, double lambda, double tail_cut) {
    if (lambda < 0.0) throw ConfigError("Skellam rate must be nonnegative");
    if (lambda == 0.0) return EmpiricalCdf::from_atoms({{0.0, 1.0}});
    const TruncatedPoissonPmf p = truncated_poisson_pmf(lambda);
    const auto len = static_cast<std::int64_t>(p.pmf.size());

    // Difference pmf by direct summation (the law is symmetric in d).
    std::vector<double> diff(static_cast<std::size_t>(2 * len - 1), 0.0);
    for (std::int64_t d = 0; d < len; ++d) {
        double s = 0.0;
        for (std::int64_t i = d; i < len; ++i)
            s += p.pmf[static_cast<std::size_t>(i)] * p.pmf[static_cast<std::size_t>(i - d)];
        diff[static_cast<std::size_t>(len - 1 + d)] = s;
        diff[static_cast<std::size_t>(len - 1 - d)] = s;
    }

    // Trim tails to tail_cut total mass, then renormalize.
    std::size_t lo = 0, hi = diff.size();
    double dropped = 0.0;
    while (hi - lo > 1 && dropped + std::min(diff[lo], diff[hi - 1]) <= tail_cut) {
        if (diff[lo] <= diff[hi - 1]) dropped += diff[lo++];
        else dropped += diff[--hi];
    }
    std::vector<std::pair<double, double>> atoms;
    atoms.reserve(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) {
        const std::int64_t d = static_cast<std::int64_t>(i) - (len - 1);
        atoms.emplace_back(scale * static_cast<double>(d), diff[i]);
    }
    return EmpiricalCdf::from_atoms(std::move(atoms));
}

EmpiricalCdf compound_poisson_sum_law(std::span<const PoissonAtom> atoms, double window,
                                      double tail_cut) {
    if (window <= 0.0) throw ConfigError("law window must be positive");
    if (atoms.empty()) return EmpiricalCdf::from_atoms({{0.0, 1.0}});

    double compensator = 0.0;
    for (const auto& a : atoms) compensator += window * a.rate * a.location;

    std::vector<TruncatedPoissonPmf> supports;
    supports.reserve(atoms.size());
    double states = 1.0;
    for (const auto& a : atoms) {
        supports.push_back(truncated_poisson_pmf(a.rate * window));
        states *= static_cast<double>(supports.back().pmf.size());
        if (states > 5e6)
            throw Error("compound-Poisson sum law enumeration too large; "
                        "use an empirical cdf instead");
    }

    std::vector<std::pair<double, double>> law;
    law.reserve(static_cast<std::size_t>(states));
    std::vector<std::int64_t> counts(atoms.size(), 0);
    // Depth-first product enumeration, accumulating the tuple probability.
    const std::size_t m = atoms.size();
    std::vector<std::size_t> idx(m, 0);
    for (;;) {
        double prob = 1.0;
        for (std::size_t j = 0; j < m; ++j) {
            counts[j] = supports[j].klo + static_cast<std::int64_t>(idx[j]);
            prob *= supports[j].pmf[idx[j]];
        }
        if (prob > 0.0)
            law.emplace_back(cp_sum_value(counts, atoms, compensator), prob);
        // advance mixed-radix counter
        std::size_t j = 0;
        while (j < m) {
            if (++idx[j] < supports[j].pmf.size()) break;
            idx[j] = 0;
            ++j;
        }
        if (j == m) break;
    }

    // Trim extreme values up to tail_cut total mass (from_atoms renormalizes).
    std::sort(law.begin(), law.end());
    std::size_t lo = 0, hi = law.size();
    double dropped = 0.0;
    while (hi - lo > 1 &&
           dropped + std::min(law[lo].second, law[hi - 1].second) <= tail_cut) {
        if (law[lo].second <= law[hi - 1].second) dropped += law[lo++].second;
        else dropped += law[--hi].second;
    }
    return EmpiricalCdf::from_atoms(
        std::vector<std::pair<double, double>>(law.begin() + static_cast<std::ptrdiff_t>(lo),
                                               law.begin() + static_cast<std::ptrdiff_t>(hi)));
}

EmpiricalCdf small_jump_sum_law(const LevyTriplet& triplet, std::int64_t n, double eps_cut,
                                double tail_cut) {
    if (n < 1) throw ConfigError("small-jump sum law requires n >= 1");
    const auto& nu = triplet.measure;
    if (const auto* tp = std::get_if<TwoPointSymmetric>(&nu.family())) {
        const double e0 = tp->jump_magnitude;
        if (e0 > eps_cut) return EmpiricalCdf::from_atoms({{0.0, 1.0}});
        const double lambda = 1.0 / (2.0 * e0 * e0 * static_cast<double>(n));
        return skellam_scaled_law(e0, lambda, tail_cut);
    }
    if (const auto* cp = std::get_if<CompoundPoissonAtoms>(&nu.family())) {
        std::vector<PoissonAtom> small;
        for (const auto& a : cp->atoms)
            if (std::fabs(a.location) <= eps_cut) small.push_back(a);
        return compound_poisson_sum_law(small, 1.0 / static_cast<double>(n), tail_cut);
    }
    throw FiniteSmallActivityError(
        "the stable-like family has infinite activity below any cut; "
        "use the inner-truncation layer");
}

// ---------------------------------------------------------------------------
// SmallSumSampler
// ---------------------------------------------------------------------------

SmallSumSampler::SmallSumSampler(const LevyTriplet& triplet, double eps_cut,
                                 std::int64_t fine_windows_per_unit,
                                 std::int64_t coarse_windows_per_unit,
                                 std::optional<double> inner_truncation_factor)
    : eps_cut_(eps_cut), fine_n_(fine_windows_per_unit), coarse_n_(coarse_windows_per_unit) {
    if (fine_n_ < 1 || coarse_n_ < 1) throw ConfigError("window counts must be >= 1");
    const auto& nu = triplet.measure;
    const double m2eps =
        std::isinf(eps_cut) ? nu.moment(2.0) : nu.truncated_moment(2.0, eps_cut);
    coarse_variance_ = m2eps / static_cast<double>(coarse_n_);
    if (m2eps == 0.0) {
        mode_ = Mode::Zero;
        return;
    }
    if (const auto* tp = std::get_if<TwoPointSymmetric>(&nu.family())) {
        mode_ = Mode::TwoPoint;
        scale_ = tp->jump_magnitude;
        const double fine_lambda =
            1.0 / (2.0 * scale_ * scale_ * static_cast<double>(fine_n_));
        coarse_lambda_ = 1.0 / (2.0 * scale_ * scale_ * static_cast<double>(coarse_n_));
        fine_atom_count_ = PoissonSampler(fine_lambda);
        return;
    }
    if (const auto* cp = std::get_if<CompoundPoissonAtoms>(&nu.family())) {
        mode_ = Mode::Atoms;
        for (const auto& a : cp->atoms)
            if (std::fabs(a.location) <= eps_cut_) small_atoms_.push_back(a);
        const double fine_w = 1.0 / static_cast<double>(fine_n_);
        const double coarse_w = 1.0 / static_cast<double>(coarse_n_);
        for (const auto& a : small_atoms_) {
            fine_atom_counts_.emplace_back(a.rate * fine_w);
            fine_compensator_ += fine_w * a.rate * a.location;
            coarse_compensator_ += coarse_w * a.rate * a.location;
        }
        return;
    }
    // Stable-like: exact simulation of the small-jump sum is impossible.
    if (!inner_truncation_factor)
        throw FiniteSmallActivityError(
            "compensated small-jump sum of the stable-like family cannot be "
            "simulated exactly; supply an inner-truncation factor");
    if (*inner_truncation_factor <= 1.0)
        throw ConfigError("inner truncation factor must exceed 1");
    mode_ = Mode::StableInner;
    exact_ = false;
    const auto& st = std::get<TruncatedStableLike>(nu.family());
    const double eps_eff = std::min(eps_cut_, st.cutoff);
    inner_eps_ = eps_eff / *inner_truncation_factor;
    band_lo_pow_ = std::pow(inner_eps_, -st.alpha);
    band_hi_pow_ = std::pow(eps_eff, -st.alpha);
    inv_alpha_neg_ = -1.0 / st.alpha;
    const double band_mass = nu.tail_mass(inner_eps_) - nu.tail_mass(eps_cut_);
    const double fine_w = 1.0 / static_cast<double>(fine_n_);
    fine_band_count_ = PoissonSampler(band_mass * fine_w);
    fine_inner_gauss_std_ = std::sqrt(nu.truncated_moment(2.0, inner_eps_) * fine_w);
}

SmallSumSampler::State SmallSumSampler::make_state() const {
    State s;
    s.atom_counts.assign(small_atoms_.size(), 0);
    return s;
}

void SmallSumSampler::reset(State& state) const {
    state.skellam_diff = 0;
    std::fill(state.atom_counts.begin(), state.atom_counts.end(), 0);
    state.continuous_sum = 0.0;
    state.jumps = 0;
}

double SmallSumSampler::draw_window(State& state, Engine& eng) const {
    switch (mode_) {
        case Mode::Zero:
            return 0.0;
        case Mode::TwoPoint: {
            const std::int64_t up = fine_atom_count_(eng);
            const std::int64_t down = fine_atom_count_(eng);
            state.skellam_diff += up - down;
            state.jumps += static_cast<std::uint32_t>(up + down);
            return scale_ * static_cast<double>(up - down);
        }
        case Mode::Atoms: {
            double v = 0.0;
            for (std::size_t j = 0; j < small_atoms_.size(); ++j) {
                const std::int64_t c = fine_atom_counts_[j](eng);
                state.atom_counts[j] += c;
                state.jumps += static_cast<std::uint32_t>(c);
                v += static_cast<double>(c) * small_atoms_[j].location;
            }
            return v - fine_compensator_;
        }
        case Mode::StableInner: {
            const std::int64_t count = fine_band_count_(eng);
            double v = 0.0;
            for (std::int64_t i = 0; i < count; ++i) {
                const double u = uniform_open(eng);
                const double mag =
                    std::pow(band_lo_pow_ - u * (band_lo_pow_ - band_hi_pow_), inv_alpha_neg_);
                v += (eng() & 1u) ? mag : -mag;
            }
            v += fine_inner_gauss_std_ * normal_draw(eng);
            state.continuous_sum += v;
            state.jumps += static_cast<std::uint32_t>(count);
            return v;
        }
    }
    return 0.0;
}

double SmallSumSampler::canonical_value(const State& state) const {
    switch (mode_) {
        case Mode::Zero:
            return 0.0;
        case Mode::TwoPoint:
            return scale_ * static_cast<double>(state.skellam_diff);
        case Mode::Atoms:
            return cp_sum_value(state.atom_counts, small_atoms_, coarse_compensator_);
        case Mode::StableInner:
            return state.continuous_sum;
    }
    return 0.0;
}

EmpiricalCdf SmallSumSampler::law(double tail_cut) const {
    switch (mode_) {
        case Mode::Zero:
            return EmpiricalCdf::from_atoms({{0.0, 1.0}});
        case Mode::TwoPoint:
            return skellam_scaled_law(scale_, coarse_lambda_, tail_cut);
        case Mode::Atoms:
            return compound_poisson_sum_law(small_atoms_,
                                            1.0 / static_cast<double>(coarse_n_), tail_cut);
        case Mode::StableInner:
            throw FiniteSmallActivityError(
                "inner-truncated small-jump sums have no exact law; "
                "build an empirical cdf from draws");
    }
    throw Error("unreachable");
}

// ---------------------------------------------------------------------------
// CoupledSchemeKernel
// ---------------------------------------------------------------------------

namespace {

SmallSumSampler make_kernel_sampler(const LevyTriplet& triplet,
                                    const CoupledSchemeKernel::Options& opt) {
    if (opt.n < 1) throw ConfigError("kernel requires n >= 1");
    if (opt.refine < 1) throw ConfigError("kernel requires refine >= 1");
    return SmallSumSampler(triplet, opt.eps_cut,
                           opt.n * static_cast<std::int64_t>(opt.refine), opt.n,
                           opt.inner_truncation_factor);
}

}  // namespace

CoupledSchemeKernel::CoupledSchemeKernel(const LevyTriplet& triplet, const Options& opt,
                                         Engine& law_eng)
    : triplet_(triplet), opt_(opt), small_sampler_(make_kernel_sampler(triplet, opt)) {
    if (small_sampler_.exact()) {
        if (small_sampler_.coarse_variance() > 0.0) law_ = small_sampler_.law(opt.law_tail_cut);
        else law_ = EmpiricalCdf::from_atoms({{0.0, 1.0}});
    } else {
        // Empirical coarse law from independent draws of the inner-truncated sum.
        if (opt.law_samples < 2) throw ConfigError("empirical law needs at least 2 samples");
        std::vector<double> draws(opt.law_samples);
        auto state = small_sampler_.make_state();
        for (auto& d : draws) {
            small_sampler_.reset(state);
            for (int j = 0; j < opt.refine; ++j) (void)small_sampler_.draw_window(state, law_eng);
            d = small_sampler_.canonical_value(state);
        }
        law_ = EmpiricalCdf::from_samples(std::move(draws));
    }
    init(triplet);
}

CoupledSchemeKernel::CoupledSchemeKernel(const LevyTriplet& triplet, const Options& opt,
                                         EmpiricalCdf small_law)
    : triplet_(triplet), opt_(opt), small_sampler_(make_kernel_sampler(triplet, opt)),
      law_(std::move(small_law)) {
    init(triplet);
}

void CoupledSchemeKernel::init(const LevyTriplet& triplet) {
    state_ = small_sampler_.make_state();
    const double fine_n = static_cast<double>(opt_.n) * opt_.refine;
    fine_drift_ = triplet.drift / fine_n;
    fine_brown_std_ = triplet.brownian / std::sqrt(fine_n);
    small_gauss_std_ = std::sqrt(small_sampler_.coarse_variance());
    const double tail_mass = std::isinf(opt_.eps_cut)
                                 ? 0.0
                                 : triplet.measure.tail_mass(opt_.eps_cut);
    has_tail_ = tail_mass > 0.0;
    if (has_tail_) {
        fine_tail_count_ = PoissonSampler(tail_mass / fine_n);
        fine_tail_comp_ = triplet.measure.tail_signed_first_moment(opt_.eps_cut) / fine_n;
    }
}

CoupledSchemeKernel::Step CoupledSchemeKernel::step(Engine& eng, std::span<double> fine_out) {
    if (!fine_out.empty() && fine_out.size() != static_cast<std::size_t>(opt_.refine))
        throw ConfigError("fine_out must match the refine factor");
    small_sampler_.reset(state_);
    Step st;
    double coarse = 0.0;
    for (int j = 0; j < opt_.refine; ++j) {
        const double small_v = small_sampler_.draw_window(state_, eng);
        double fine = fine_drift_ + fine_brown_std_ * normal_draw(eng) + small_v;
        if (has_tail_) {
            std::uint32_t cnt = 0;
            fine += detail::draw_tail_jump_sum(triplet_.measure, opt_.eps_cut, fine_tail_count_,
                                               eng, cnt) -
                    fine_tail_comp_;
            st.tail_jumps += cnt;
        }
        if (!fine_out.empty()) fine_out[static_cast<std::size_t>(j)] = fine;
        coarse += fine;
    }
    st.small_jumps = state_.jumps;
    st.small_sum = small_sampler_.canonical_value(state_);
    if (small_gauss_std_ > 0.0) {
        const double u = law_.rank_uniform(st.small_sum, uniform_open(eng));
        st.small_gauss = small_gauss_std_ * inv_norm_cdf(u);
    }
    st.coarse_exact = coarse;
    st.coarse_approx = coarse - st.small_sum + st.small_gauss;
    return st;
}

// ---------------------------------------------------------------------------
// Increment-level API
// ---------------------------------------------------------------------------

namespace {

CoupledIncrementBatch run_kernel(CoupledSchemeKernel& kernel, std::size_t count, Engine& eng) {
    if (count < 1) throw ConfigError("batch size must be >= 1");
    CoupledIncrementBatch batch;
    batch.delta_exact.resize(count);
    batch.delta_approx.resize(count);
    batch.jump_counts.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto st = kernel.step(eng);
        batch.delta_exact[i] = st.coarse_exact;
        batch.delta_approx[i] = st.coarse_approx;
        batch.jump_counts[i] = st.tail_jumps;
    }
    return batch;
}

}  // namespace

CoupledIncrementBatch sample_coupled_increment(const LevyTriplet& triplet, std::int64_t n,
                                               double eps, std::size_t count,
                                               const EmpiricalCdf& small_jump_cdf, Engine& eng,
                                               std::optional<double> inner_truncation) {
    if (!(eps > 0.0)) throw ConfigError("coupled increments require eps > 0");
    CoupledSchemeKernel::Options opt;
    opt.n = n;
    opt.eps_cut = eps;
    opt.inner_truncation_factor = inner_truncation;
    CoupledSchemeKernel kernel(triplet, opt, small_jump_cdf);
    return run_kernel(kernel, count, eng);
}

CoupledIncrementBatch sample_coupled_brownian_increment(const LevyTriplet& triplet,
                                                        std::int64_t n, std::size_t count,
                                                        const EmpiricalCdf& increment_cdf,
                                                        Engine& eng) {
    CoupledSchemeKernel::Options opt;
    opt.n = n;
    opt.eps_cut = kInf;
    CoupledSchemeKernel kernel(triplet, opt, increment_cdf);
    return run_kernel(kernel, count, eng);
}

std::pair<PathGrid, PathGrid> simulate_coupled_paths(double x0, const SigmaFn& sigma,
                                                     const CoupledIncrementBatch& coupled,
                                                     std::int64_t n, double horizon) {
    if (coupled.delta_exact.size() != coupled.delta_approx.size())
        throw ConfigError("coupled batch arrays must have equal length");
    return {simulate_path(x0, sigma, coupled.delta_exact, n, horizon),
            simulate_path(x0, sigma, coupled.delta_approx, n, horizon)};
}

}  // namespace levysim
