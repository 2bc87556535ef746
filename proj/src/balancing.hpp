#pragma once

#include <cstdint>
#include <span>

#include "targets.hpp"

namespace barker {

/// A balancing function g with g(t) = t * g(1/t) for t > 0 and g(0) = 0.
/// Hastings is min(1, t); Barker is t / (1 + t).
enum class BalancingKind { Hastings, Barker };

/// g(t) for t in [0, +inf]; stable across the full double range.
double eval_balancing(BalancingKind kind, double t);

/// log g_B(e^{log_t}) = -softplus(-log_t).  The form every sampler uses;
/// the linear-space eval_balancing exists for tests and small oracles.
double barker_log_balancing(double log_t);

/// First-order approximation of the density ratio pi(x+z)/pi(x):
/// t*(z) = exp(z * beta) with beta = grad log pi(x).  Satisfies
/// t*(z) * t*(-z) = 1 exactly in log space.
struct FirstOrderRatio {
    double beta = 0.0;

    double log_ratio(double z) const { return z * beta; }
    double ratio(double z) const { return std::exp(z * beta); }
};

/// Max deviation of (1 + 1/t) * g(t) over the grid from its value at t = 1.
/// Identically zero for Barker; bounded away from zero for Hastings on any
/// grid reaching beyond t = 1.
double constancy_deviation(BalancingKind kind, std::span<const double> t_grid);

/// Monte Carlo estimate of the jump intensity
/// integral of g_B(t*_x(z)) q(z) dz with q = N(0, proposal_std^2),
/// which equals 1/2 regardless of target, x and proposal_std.
double barker_jump_rate_mc(const TargetDensity& target, double x,
                           double proposal_std, long long n_samples,
                           std::uint64_t seed);

}  // namespace barker
