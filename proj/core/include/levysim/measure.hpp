#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "levysim/rng.hpp"

namespace levysim {

/// Symmetric two-atom measure (2 eps0^2)^-1 (delta_{+eps0} + delta_{-eps0}).
/// Total mass eps0^-2, second absolute moment exactly 1, fourth eps0^2.
struct TwoPointSymmetric {
    double jump_magnitude;  // eps0 > 0
};

/// Symmetric density c |z|^{-1-alpha} on 0 < |z| <= R. Infinite activity,
/// finite moments of every order >= 2 thanks to the cutoff.
struct TruncatedStableLike {
    double alpha;   // index in (0, 2)
    double scale;   // c > 0
    double cutoff;  // R > 0
};

struct PoissonAtom {
    double location;  // z != 0
    double rate;      // > 0
};

/// Finite list of jump atoms; finite activity (an empty list is the zero
/// measure, handy for pure drift+Brownian drivers).
struct CompoundPoissonAtoms {
    std::vector<PoissonAtom> atoms;
};

/// Absolute-moment query: order k >= 2, optionally truncated to |z| <= eps.
struct MomentQuery {
    double order = 2.0;
    std::optional<double> eps;  // nullopt: untruncated m_k
};

/// One of three parametric jump-measure families with closed-form moment
/// functionals and exact tail samplers. Immutable after construction; safe
/// to share across threads (sampling takes an explicit engine).
class LevyMeasureSpec {
public:
    using Family = std::variant<TwoPointSymmetric, TruncatedStableLike, CompoundPoissonAtoms>;

    static LevyMeasureSpec two_point(double jump_magnitude);
    static LevyMeasureSpec stable(double alpha, double scale, double cutoff);
    static LevyMeasureSpec compound_poisson(std::vector<PoissonAtom> atoms);
    /// The zero measure (no jumps).
    static LevyMeasureSpec none();

    const Family& family() const { return family_; }
    bool is_two_point() const;
    bool is_stable() const;
    bool is_compound_poisson() const;

    /// Total mass nu(R_*); +infinity for the stable-like family.
    double total_mass() const;
    bool finite_activity() const;

    /// F_eps = nu({|z| > eps}), the expected number of large jumps per unit
    /// time. Exact closed form per family.
    double tail_mass(double eps) const;

    /// m_k (untruncated) or m_{k,eps} (restricted to |z| <= eps), exact.
    /// Throws InfiniteMomentError if the requested moment diverges.
    double moment(const MomentQuery& q) const;
    double moment(double order) const { return moment({order, std::nullopt}); }
    double truncated_moment(double order, double eps) const { return moment({order, eps}); }

    /// m_{4,eps} / m_{2,eps}; always <= eps^2. Throws
    /// DegenerateSmallJumpsError when there is no mass at or below eps.
    double delta_eps(double eps) const;

    /// Signed first tail moment: integral of z over {|z| > eps}. Zero for the
    /// symmetric families; exact atom sum otherwise.
    double tail_signed_first_moment(double eps) const;

    /// Signed first moment of the whole measure (finite-activity families
    /// only; used as the compound-Poisson compensator).
    double signed_first_moment() const;

    /// One draw from the normalized tail law nu 1_{|z|>eps} / F_eps.
    /// Inverse-CDF on each sign branch for the stable-like family,
    /// rate-weighted categorical choice for atom families.
    double sample_large_jump(double eps, Engine& eng) const;

    /// One draw from nu / nu(R_*) (finite-activity families only).
    double sample_full_jump(Engine& eng) const;

private:
    explicit LevyMeasureSpec(Family f) : family_(std::move(f)) {}
    Family family_;
};

}  // namespace levysim
