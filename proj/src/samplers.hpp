#pragma once

#include <cstdint>
#include <limits>
#include <optional>

#include "adapt.hpp"
#include "preconditioner.hpp"
#include "rng.hpp"
#include "targets.hpp"
#include "trace.hpp"

namespace barker {

enum class SamplerKind { Rwm, Mala, BarkerCoordinatewise, BarkerGlobal };

const char* sampler_label(SamplerKind kind);

/// Standard optimal-scaling acceptance targets: 0.234 (RWM), 0.574 (MALA),
/// 0.57 (Barker variants).
double default_target_accept(SamplerKind kind);

/// Current position with its cached log-density; the gradient is cached
/// lazily so gradient-free samplers never pay for it.
struct ChainState {
    VectorXd position;
    double log_density = 0.0;
    std::optional<VectorXd> gradient;
};

ChainState make_chain_state(const TargetDensity& target, VectorXd position,
                            bool with_gradient);

/// Fills the cached gradient if absent and returns it.
const VectorXd& state_gradient(ChainState& state, const TargetDensity& target);

struct MHStepResult {
    VectorXd proposal;
    double log_accept_prob = 0.0;  // <= 0; -inf on auto-reject
    bool accepted = false;
    bool gradient_blowup = false;  // non-finite proposal/gradient auto-reject
    ChainState next_state;
};

MHStepResult rwm_step(ChainState& state, const TargetDensity& target,
                      const Preconditioner& precond, Rng& rng);
MHStepResult mala_step(ChainState& state, const TargetDensity& target,
                       const Preconditioner& precond, Rng& rng);

/// Coordinate-wise proposal: whitened innovations flipped per coordinate
/// with probability F_L(wgrad_i * xi_i), giving 2^d candidate moves.
MHStepResult barker_step_coordinatewise(ChainState& state,
                                        const TargetDensity& target,
                                        const Preconditioner& precond, Rng& rng);

/// Single global flip: after xi is drawn only x + L xi and x - L xi are
/// candidate moves.
MHStepResult barker_step_global(ChainState& state, const TargetDensity& target,
                                const Preconditioner& precond, Rng& rng);

MHStepResult sampler_step(SamplerKind kind, ChainState& state,
                          const TargetDensity& target,
                          const Preconditioner& precond, Rng& rng);

/// Log acceptance probability of the coordinate-wise proposal, all in
/// whitened coordinates: min(0, lp_y - lp_x
///   + sum_i [softplus(-z_i wgrad_x_i) - softplus(z_i wgrad_y_i)]).
/// Stable for logits up to |1e6|; throws on NaN inputs.
double barker_log_accept(double lp_x, double lp_y, const VectorXd& wgrad_x,
                         const VectorXd& wgrad_y, const VectorXd& z_whitened);

/// Exact log transition density j(from -> to) of each sampler's proposal;
/// used by the reversibility checks and the discretized-chain oracle, so it
/// is an independent route from the softplus-difference acceptance above.
double log_proposal_density(SamplerKind kind, const TargetDensity& target,
                            const Preconditioner& precond, const VectorXd& from,
                            const VectorXd& to);

/// Generic MH log acceptance between two fixed points using the exact
/// proposal densities.
double log_accept_between(SamplerKind kind, const TargetDensity& target,
                          const Preconditioner& precond, const VectorXd& x,
                          const VectorXd& y);

/// | log[pi(x) j(x,y) a(x,y)] - log[pi(y) j(y,x) a(y,x)] |; zero by
/// convention when both directions reject with certainty.
double reversibility_residual(SamplerKind kind, const TargetDensity& target,
                              const Preconditioner& precond, const VectorXd& x,
                              const VectorXd& y);

struct ChainOptions {
    SamplerKind sampler = SamplerKind::BarkerCoordinatewise;
    long long iterations = 1000;
    std::uint64_t seed = 1;
    bool adapt = true;
    bool dense = false;
    // NaN means the per-sampler default
    double target_accept = std::numeric_limits<double>::quiet_NaN();
    double learning_exponent = 0.6;
    // NaN means 2.38 / sqrt(d)
    double initial_scale = std::numeric_limits<double>::quiet_NaN();
    bool binary_accept_stat = false;
    bool record_adaptation = true;
    std::optional<Preconditioner> fixed_preconditioner;  // when adapt = false
};

/// Runs one chain; deterministic given (options, x0).  Adaptation, when
/// enabled, updates after every iteration with the realized acceptance
/// probability (or the binary indicator behind the flag).
Trace run_chain(const TargetDensity& target, const ChainOptions& options,
                const VectorXd& x0);

/// Same with the default zero start.
Trace run_chain(const TargetDensity& target, const ChainOptions& options);

}  // namespace barker
