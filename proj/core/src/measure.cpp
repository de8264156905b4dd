#include "levysim/measure.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "levysim/errors.hpp"

namespace levysim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool cond, const char* msg) {
    if (!cond) throw ConfigError(msg);
}

// Integral of |z|^k nu(dz) over eps_lo < |z| <= eps_hi for the stable-like
// density c |z|^{-1-alpha}: 2c (hi^{k-alpha} - lo^{k-alpha}) / (k-alpha).
double stable_band_moment(const TruncatedStableLike& s, double k, double lo, double hi) {
    hi = std::min(hi, s.cutoff);
    if (hi <= lo) return 0.0;
    const double p = k - s.alpha;
    if (p <= 0.0 && lo <= 0.0) throw InfiniteMomentError("moment of order " + std::to_string(k) +
                                                         " diverges for alpha " +
                                                         std::to_string(s.alpha));
    return 2.0 * s.scale * (std::pow(hi, p) - std::pow(lo, p)) / p;
}

}  // namespace

LevyMeasureSpec LevyMeasureSpec::two_point(double jump_magnitude) {
    require(jump_magnitude > 0.0, "two-point family requires jump magnitude > 0");
    return LevyMeasureSpec(TwoPointSymmetric{jump_magnitude});
}

LevyMeasureSpec LevyMeasureSpec::stable(double alpha, double scale, double cutoff) {
    require(alpha > 0.0 && alpha < 2.0, "stable-like family requires alpha in (0, 2)");
    require(scale > 0.0, "stable-like family requires scale > 0");
    require(cutoff > 0.0, "stable-like family requires cutoff > 0");
    return LevyMeasureSpec(TruncatedStableLike{alpha, scale, cutoff});
}

LevyMeasureSpec LevyMeasureSpec::compound_poisson(std::vector<PoissonAtom> atoms) {
    for (const auto& a : atoms) {
        require(a.location != 0.0, "compound-Poisson atom locations must be nonzero");
        require(a.rate > 0.0, "compound-Poisson atom rates must be positive");
    }
    return LevyMeasureSpec(CompoundPoissonAtoms{std::move(atoms)});
}

LevyMeasureSpec LevyMeasureSpec::none() { return compound_poisson({}); }

bool LevyMeasureSpec::is_two_point() const {
    return std::holds_alternative<TwoPointSymmetric>(family_);
}
bool LevyMeasureSpec::is_stable() const {
    return std::holds_alternative<TruncatedStableLike>(family_);
}
bool LevyMeasureSpec::is_compound_poisson() const {
    return std::holds_alternative<CompoundPoissonAtoms>(family_);
}

double LevyMeasureSpec::total_mass() const {
    return std::visit(
        [](const auto& f) -> double {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, TwoPointSymmetric>) {
                const double e0 = f.jump_magnitude;
                return 1.0 / (e0 * e0);
            } else if constexpr (std::is_same_v<F, TruncatedStableLike>) {
                return kInf;
            } else {
                double m = 0.0;
                for (const auto& a : f.atoms) m += a.rate;
                return m;
            }
        },
        family_);
}

bool LevyMeasureSpec::finite_activity() const { return !is_stable(); }

double LevyMeasureSpec::tail_mass(double eps) const {
    require(eps > 0.0, "tail mass requires eps > 0");
    return std::visit(
        [eps](const auto& f) -> double {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, TwoPointSymmetric>) {
                const double e0 = f.jump_magnitude;
                return e0 > eps ? 1.0 / (e0 * e0) : 0.0;
            } else if constexpr (std::is_same_v<F, TruncatedStableLike>) {
                if (eps >= f.cutoff) return 0.0;
                return 2.0 * f.scale *
                       (std::pow(eps, -f.alpha) - std::pow(f.cutoff, -f.alpha)) / f.alpha;
            } else {
                double m = 0.0;
                for (const auto& a : f.atoms)
                    if (std::fabs(a.location) > eps) m += a.rate;
                return m;
            }
        },
        family_);
}

double LevyMeasureSpec::moment(const MomentQuery& q) const {
    require(q.order >= 2.0, "moment order must be >= 2");
    if (q.eps) require(*q.eps > 0.0, "moment truncation level must be > 0");
    const double k = q.order;
    const double hi = q.eps ? *q.eps : kInf;
    return std::visit(
        [k, hi](const auto& f) -> double {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, TwoPointSymmetric>) {
                const double e0 = f.jump_magnitude;
                return e0 <= hi ? std::pow(e0, k - 2.0) : 0.0;
            } else if constexpr (std::is_same_v<F, TruncatedStableLike>) {
                return stable_band_moment(f, k, 0.0, hi);
            } else {
                double m = 0.0;
                for (const auto& a : f.atoms) {
                    const double mag = std::fabs(a.location);
                    if (mag <= hi) m += a.rate * std::pow(mag, k);
                }
                return m;
            }
        },
        family_);
}

double LevyMeasureSpec::delta_eps(double eps) const {
    const double m2 = truncated_moment(2.0, eps);
    if (m2 <= 0.0)
        throw DegenerateSmallJumpsError("no jump mass at or below eps=" + std::to_string(eps));
    return truncated_moment(4.0, eps) / m2;
}

double LevyMeasureSpec::tail_signed_first_moment(double eps) const {
    require(eps > 0.0, "tail first moment requires eps > 0");
    if (const auto* cp = std::get_if<CompoundPoissonAtoms>(&family_)) {
        double m = 0.0;
        for (const auto& a : cp->atoms)
            if (std::fabs(a.location) > eps) m += a.rate * a.location;
        return m;
    }
    return 0.0;  // both parametric families are symmetric
}

double LevyMeasureSpec::signed_first_moment() const {
    if (const auto* cp = std::get_if<CompoundPoissonAtoms>(&family_)) {
        double m = 0.0;
        for (const auto& a : cp->atoms) m += a.rate * a.location;
        return m;
    }
    if (is_two_point()) return 0.0;
    throw InfiniteActivityError("signed first moment of the full measure needs finite activity");
}

double LevyMeasureSpec::sample_large_jump(double eps, Engine& eng) const {
    const double tail = tail_mass(eps);
    if (tail <= 0.0)
        throw EmptyTailError("no jump mass above eps=" + std::to_string(eps));
    return std::visit(
        [&](const auto& f) -> double {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, TwoPointSymmetric>) {
                return (eng() & 1u) ? f.jump_magnitude : -f.jump_magnitude;
            } else if constexpr (std::is_same_v<F, TruncatedStableLike>) {
                // Inverse CDF of the magnitude law on (eps, R]:
                //   z = (eps^-a - u (eps^-a - R^-a))^{-1/a},
                // sign chosen by a fair coin. Rejection-free and exact.
                const double lo_pow = std::pow(eps, -f.alpha);
                const double hi_pow = std::pow(f.cutoff, -f.alpha);
                const double u = uniform_open(eng);
                const double mag = std::pow(lo_pow - u * (lo_pow - hi_pow), -1.0 / f.alpha);
                return (eng() & 1u) ? mag : -mag;
            } else {
                double u = uniform_open(eng) * tail;
                for (const auto& a : f.atoms) {
                    if (std::fabs(a.location) > eps) {
                        u -= a.rate;
                        if (u <= 0.0) return a.location;
                    }
                }
                // Unreachable up to roundoff; return the last tail atom.
                for (auto it = f.atoms.rbegin(); it != f.atoms.rend(); ++it)
                    if (std::fabs(it->location) > eps) return it->location;
                throw EmptyTailError("tail sampling failed");
            }
        },
        family_);
}

double LevyMeasureSpec::sample_full_jump(Engine& eng) const {
    if (!finite_activity())
        throw InfiniteActivityError("exact jump sampling needs a finite-activity measure");
    const double mass = total_mass();
    if (mass <= 0.0) throw EmptyTailError("zero measure has no jumps to sample");
    if (const auto* tp = std::get_if<TwoPointSymmetric>(&family_)) {
        return (eng() & 1u) ? tp->jump_magnitude : -tp->jump_magnitude;
    }
    const auto& atoms = std::get<CompoundPoissonAtoms>(family_).atoms;
    double u = uniform_open(eng) * mass;
    for (const auto& a : atoms) {
        u -= a.rate;
        if (u <= 0.0) return a.location;
    }
    return atoms.back().location;
}

}  // namespace levysim
