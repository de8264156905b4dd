#include "levysim/experiments/runners.hpp"

#include "levysim/errors.hpp"
#include "runner_util.hpp"

namespace levysim::experiments {

RateReport run_scheme_rate(const ExperimentConfig& cfg) {
    if (cfg.mode == "increment-gap") return run_scheme_rate_increment_gap(cfg);
    return run_scheme_rate_paths(cfg);
}

RateReport run_experiment(const ExperimentConfig& cfg) {
    switch (cfg.experiment) {
        case ExperimentKind::CltCheck: return run_clt_check(cfg);
        case ExperimentKind::CltLowerBound: return run_clt_lower_bound(cfg);
        case ExperimentKind::SchemeRate: return run_scheme_rate(cfg);
        case ExperimentKind::EulerBaseline: return run_euler_baseline(cfg);
        case ExperimentKind::NeglectVsGauss: return run_neglect_vs_gauss(cfg);
        case ExperimentKind::BrownianApprox: return run_brownian_approx(cfg);
        case ExperimentKind::CostAudit: return run_cost_audit(cfg);
    }
    throw ConfigError("unknown experiment kind");
}

}  // namespace levysim::experiments
