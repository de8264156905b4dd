#include "levysim/increments.hpp"

#include <cmath>

#include "levysim/errors.hpp"

namespace levysim {

IncrementParams make_params(const LevyTriplet& triplet, std::int64_t n, double eps) {
    if (n < 1) throw ConfigError("increment params require n >= 1");
    if (!(eps > 0.0)) throw ConfigError("increment params require eps > 0");
    IncrementParams p;
    p.triplet = triplet;
    p.n = n;
    p.eps = eps;
    const auto& nu = triplet.measure;
    const double dn = static_cast<double>(n);
    const double m2eps = nu.truncated_moment(2.0, eps);
    p.drift_term = (triplet.drift - nu.tail_signed_first_moment(eps)) / dn;
    p.small_jump_var = m2eps / dn;
    p.gauss_std = std::sqrt((triplet.brownian * triplet.brownian + m2eps) / dn);
    p.neglect_gauss_std = triplet.brownian / std::sqrt(dn);
    p.poisson_mean = nu.tail_mass(eps) / dn;
    p.degenerate_small_jumps = (m2eps == 0.0);
    return p;
}

namespace detail {

double draw_tail_jump_sum(const LevyMeasureSpec& measure, double eps,
                          const PoissonSampler& count_law, Engine& eng,
                          std::uint32_t& count_out) {
    const std::int64_t n_jumps = count_law(eng);
    count_out = static_cast<std::uint32_t>(n_jumps);
    double sum = 0.0;
    for (std::int64_t i = 0; i < n_jumps; ++i) sum += measure.sample_large_jump(eps, eng);
    return sum;
}

}  // namespace detail

ApproxIncrementSampler::ApproxIncrementSampler(const IncrementParams& params, IncrementKind kind)
    : params_(params),
      gauss_std_(kind == IncrementKind::Neglect ? params.neglect_gauss_std : params.gauss_std),
      tail_count_(params.poisson_mean),
      has_tail_(params.poisson_mean > 0.0) {
    if (kind == IncrementKind::Exact)
        throw ConfigError("use ExactIncrementSampler for exact increments");
}

double ApproxIncrementSampler::draw(Engine& eng, std::uint32_t& jumps_out) const {
    jumps_out = 0;
    double v = params_.drift_term + gauss_std_ * normal_draw(eng);
    if (has_tail_) {
        v += detail::draw_tail_jump_sum(params_.triplet.measure, params_.eps, tail_count_, eng,
                                        jumps_out);
    }
    return v;
}

ExactIncrementSampler::ExactIncrementSampler(const LevyTriplet& triplet, std::int64_t n)
    : triplet_(triplet), jump_count_(0.0) {
    if (n < 1) throw ConfigError("exact increments require n >= 1");
    const auto& nu = triplet.measure;
    if (!nu.finite_activity())
        throw InfiniteActivityError("exact increments require a finite-activity measure");
    const double dn = static_cast<double>(n);
    const double mass = nu.total_mass();
    drift_ = triplet.drift / dn;
    gauss_std_ = triplet.brownian / std::sqrt(dn);
    has_jumps_ = mass > 0.0;
    compensator_ = has_jumps_ ? nu.signed_first_moment() / dn : 0.0;
    if (has_jumps_) jump_count_ = PoissonSampler(mass / dn);
}

double ExactIncrementSampler::draw(Engine& eng, std::uint32_t& jumps_out) const {
    jumps_out = 0;
    double v = drift_ + gauss_std_ * normal_draw(eng) - compensator_;
    if (has_jumps_) {
        const std::int64_t jumps = jump_count_(eng);
        jumps_out = static_cast<std::uint32_t>(jumps);
        for (std::int64_t j = 0; j < jumps; ++j) v += triplet_.measure.sample_full_jump(eng);
    }
    return v;
}

namespace {

template <class DrawFn>
IncrementBatch fill_batch(IncrementKind kind, std::size_t count, const DrawFn& draw,
                          Engine& eng) {
    if (count < 1) throw ConfigError("batch size must be >= 1");
    IncrementBatch batch;
    batch.kind = kind;
    batch.values.resize(count);
    batch.jump_counts.assign(count, 0);
    for (std::size_t i = 0; i < count; ++i)
        batch.values[i] = draw(eng, batch.jump_counts[i]);
    return batch;
}

}  // namespace

IncrementBatch sample_gauss_compensated(const IncrementParams& params, std::size_t count,
                                        Engine& eng) {
    const ApproxIncrementSampler sampler(params, IncrementKind::GaussCompensated);
    return fill_batch(IncrementKind::GaussCompensated, count,
                      [&](Engine& e, std::uint32_t& j) { return sampler.draw(e, j); }, eng);
}

IncrementBatch sample_neglect(const IncrementParams& params, std::size_t count, Engine& eng) {
    const ApproxIncrementSampler sampler(params, IncrementKind::Neglect);
    return fill_batch(IncrementKind::Neglect, count,
                      [&](Engine& e, std::uint32_t& j) { return sampler.draw(e, j); }, eng);
}

IncrementBatch sample_exact(const LevyTriplet& triplet, std::int64_t n, std::size_t count,
                            Engine& eng) {
    const ExactIncrementSampler sampler(triplet, n);
    return fill_batch(IncrementKind::Exact, count,
                      [&](Engine& e, std::uint32_t& j) { return sampler.draw(e, j); }, eng);
}

}  // namespace levysim
