#pragma once

#include "levysim/experiments/config.hpp"
#include "levysim/experiments/report.hpp"

namespace levysim::experiments {

/// Verifies the near-Gaussianity rate of the centered two-point jump process:
/// empirical W2^2(Y_t, N(0, t)) <= cap_c * min(eps0^2, t) on the bound grid,
/// plus a log-log slope of W2^2 against eps0 at t = 1.
RateReport run_clt_check(const ExperimentConfig& cfg);

/// Companion lower bound: W2^2 >= floor_c * min(t, eps0^2) on the same grid,
/// with a t-profile at fixed eps0 exposing the min-shape kink.
RateReport run_clt_lower_bound(const ExperimentConfig& cfg);

/// Euler strong-error baseline against a shared-noise refined reference path
/// (exact increments; finite-activity drivers only). Target slope -1.
RateReport run_euler_baseline(const ExperimentConfig& cfg);

/// Strong error of the Gaussian-compensated scheme along eps = 1/n (path-rate
/// mode), or the increment-level coupling gap against delta_eps (increment-gap
/// mode).
RateReport run_scheme_rate(const ExperimentConfig& cfg);

/// Increment-level comparison of the jump-neglecting and Gaussian-compensated
/// approximations at matched cost (shared tail jumps cancel from both gaps).
RateReport run_neglect_vs_gauss(const ExperimentConfig& cfg);

/// Coupled approximation of the jump SDE by its moment-matched Brownian SDE
/// for measures supported in {|z| <= eps}; MSE slope against eps.
RateReport run_brownian_approx(const ExperimentConfig& cfg);

/// Simulation-cost audit: mean cost against T(n + F_eps) and the cost growth
/// exponent along eps = 1/n.
RateReport run_cost_audit(const ExperimentConfig& cfg);

/// Dispatch on cfg.experiment.
RateReport run_experiment(const ExperimentConfig& cfg);

}  // namespace levysim::experiments
