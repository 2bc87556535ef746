#include "samplers.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "special.hpp"

namespace barker {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

VectorXd standard_normal_vector(Rng& rng, int d) {
    VectorXd xi(d);
    for (int i = 0; i < d; ++i) xi[i] = rng.normal();
    return xi;
}

double safe_log_density(const TargetDensity& target, const VectorXd& y) {
    const double lp = target.log_density(y);
    return std::isnan(lp) ? kNegInf : lp;
}

// Accept/reject with a single uniform per step, then assemble the result.
MHStepResult finish_step(ChainState& state, VectorXd proposal, double lap,
                         double lp_y, std::optional<VectorXd> grad_y,
                         bool blowup, Rng& rng) {
    MHStepResult res;
    res.log_accept_prob = lap;
    res.gradient_blowup = blowup;
    res.accepted = std::log(rng.uniform()) < lap;
    if (res.accepted) {
        res.next_state.position = proposal;
        res.next_state.log_density = lp_y;
        res.next_state.gradient = std::move(grad_y);
    } else {
        res.next_state = state;
    }
    res.proposal = std::move(proposal);
    return res;
}

}  // namespace

const char* sampler_label(SamplerKind kind) {
    switch (kind) {
        case SamplerKind::Rwm: return "rwm";
        case SamplerKind::Mala: return "mala";
        case SamplerKind::BarkerCoordinatewise: return "barker";
        case SamplerKind::BarkerGlobal: return "barker-global";
    }
    return "unknown";
}

double default_target_accept(SamplerKind kind) {
    switch (kind) {
        case SamplerKind::Rwm: return 0.234;
        case SamplerKind::Mala: return 0.574;
        case SamplerKind::BarkerCoordinatewise: return 0.57;
        case SamplerKind::BarkerGlobal: return 0.57;
    }
    return 0.234;
}

ChainState make_chain_state(const TargetDensity& target, VectorXd position,
                            bool with_gradient) {
    ChainState s;
    s.log_density = target.log_density(position);
    if (with_gradient) s.gradient = target.grad_log_density(position);
    s.position = std::move(position);
    return s;
}

const VectorXd& state_gradient(ChainState& state, const TargetDensity& target) {
    if (!state.gradient) state.gradient = target.grad_log_density(state.position);
    return *state.gradient;
}

MHStepResult rwm_step(ChainState& state, const TargetDensity& target,
                      const Preconditioner& precond, Rng& rng) {
    const int d = target.dim();
    VectorXd y = state.position + precond.factor_apply(standard_normal_vector(rng, d));
    const bool finite = y.allFinite();
    double lap = kNegInf;
    double lp_y = kNegInf;
    if (finite) {
        lp_y = safe_log_density(target, y);
        lap = std::min(0.0, lp_y - state.log_density);
    }
    return finish_step(state, std::move(y), lap, lp_y, std::nullopt, !finite,
                       rng);
}

MHStepResult mala_step(ChainState& state, const TargetDensity& target,
                       const Preconditioner& precond, Rng& rng) {
    const int d = target.dim();
    const VectorXd half_drift_w =
        0.5 * precond.factor_transpose_apply(state_gradient(state, target));
    const VectorXd xi = standard_normal_vector(rng, d);
    const VectorXd z_w = half_drift_w + xi;
    VectorXd y = state.position + precond.factor_apply(z_w);

    double lap = kNegInf;
    double lp_y = kNegInf;
    std::optional<VectorXd> grad_y;
    bool blowup = true;
    if (y.allFinite()) {
        lp_y = safe_log_density(target, y);
        VectorXd g = target.grad_log_density(y);
        if (g.allFinite()) {
            blowup = false;
            // reverse whitened residual L^{-1}(x - mu(y))
            const VectorXd r_rev =
                -z_w - 0.5 * precond.factor_transpose_apply(g);
            lap = std::min(0.0, lp_y - state.log_density -
                                    0.5 * r_rev.squaredNorm() +
                                    0.5 * xi.squaredNorm());
            grad_y = std::move(g);
        }
    }
    return finish_step(state, std::move(y), lap, lp_y, std::move(grad_y),
                       blowup, rng);
}

double barker_log_accept(double lp_x, double lp_y, const VectorXd& wgrad_x,
                         const VectorXd& wgrad_y, const VectorXd& z_whitened) {
    if (std::isnan(lp_x) || std::isnan(lp_y) || wgrad_x.hasNaN() ||
        wgrad_y.hasNaN() || z_whitened.hasNaN())
        throw std::invalid_argument("barker_log_accept: NaN input");
    double acc = lp_y - lp_x;
    for (Eigen::Index i = 0; i < z_whitened.size(); ++i)
        acc += softplus(-z_whitened[i] * wgrad_x[i]) -
               softplus(z_whitened[i] * wgrad_y[i]);
    return std::min(0.0, acc);
}

namespace {

template <typename FlipAndAccept>
MHStepResult barker_step_impl(ChainState& state, const TargetDensity& target,
                              const Preconditioner& precond, Rng& rng,
                              FlipAndAccept&& flip_and_accept) {
    const int d = target.dim();
    const VectorXd wgrad_x =
        precond.factor_transpose_apply(state_gradient(state, target));
    const VectorXd xi = standard_normal_vector(rng, d);
    const VectorXd z_w = flip_and_accept.flip(wgrad_x, xi, rng);
    VectorXd y = state.position + precond.factor_apply(z_w);

    double lap = kNegInf;
    double lp_y = kNegInf;
    std::optional<VectorXd> grad_y;
    bool blowup = true;
    if (y.allFinite()) {
        lp_y = safe_log_density(target, y);
        VectorXd g = target.grad_log_density(y);
        if (g.allFinite()) {
            blowup = false;
            const VectorXd wgrad_y = precond.factor_transpose_apply(g);
            lap = flip_and_accept.log_accept(state.log_density, lp_y, wgrad_x,
                                             wgrad_y, z_w);
            grad_y = std::move(g);
        }
    }
    return finish_step(state, std::move(y), lap, lp_y, std::move(grad_y),
                       blowup, rng);
}

struct CoordinatewiseFlip {
    VectorXd flip(const VectorXd& wgrad, const VectorXd& xi, Rng& rng) const {
        VectorXd z(xi.size());
        for (Eigen::Index i = 0; i < xi.size(); ++i) {
            const bool keep = rng.bernoulli(logistic_cdf(wgrad[i] * xi[i]));
            z[i] = keep ? xi[i] : -xi[i];
        }
        return z;
    }
    double log_accept(double lp_x, double lp_y, const VectorXd& wg_x,
                      const VectorXd& wg_y, const VectorXd& z) const {
        return barker_log_accept(lp_x, lp_y, wg_x, wg_y, z);
    }
};

struct GlobalFlip {
    VectorXd flip(const VectorXd& wgrad, const VectorXd& xi, Rng& rng) const {
        const bool keep = rng.bernoulli(logistic_cdf(wgrad.dot(xi)));
        return keep ? xi : VectorXd(-xi);
    }
    double log_accept(double lp_x, double lp_y, const VectorXd& wg_x,
                      const VectorXd& wg_y, const VectorXd& z) const {
        // grouped like the coordinate-wise form so the two variants are
        // bit-identical in one dimension
        double acc = lp_y - lp_x;
        acc += softplus(-wg_x.dot(z)) - softplus(wg_y.dot(z));
        return std::min(0.0, acc);
    }
};

}  // namespace

MHStepResult barker_step_coordinatewise(ChainState& state,
                                        const TargetDensity& target,
                                        const Preconditioner& precond,
                                        Rng& rng) {
    return barker_step_impl(state, target, precond, rng, CoordinatewiseFlip{});
}

MHStepResult barker_step_global(ChainState& state, const TargetDensity& target,
                                const Preconditioner& precond, Rng& rng) {
    return barker_step_impl(state, target, precond, rng, GlobalFlip{});
}

MHStepResult sampler_step(SamplerKind kind, ChainState& state,
                          const TargetDensity& target,
                          const Preconditioner& precond, Rng& rng) {
    switch (kind) {
        case SamplerKind::Rwm: return rwm_step(state, target, precond, rng);
        case SamplerKind::Mala: return mala_step(state, target, precond, rng);
        case SamplerKind::BarkerCoordinatewise:
            return barker_step_coordinatewise(state, target, precond, rng);
        case SamplerKind::BarkerGlobal:
            return barker_step_global(state, target, precond, rng);
    }
    throw std::logic_error("sampler_step: unknown kind");
}

double log_proposal_density(SamplerKind kind, const TargetDensity& target,
                            const Preconditioner& precond, const VectorXd& from,
                            const VectorXd& to) {
    const int d = target.dim();
    const VectorXd z_w = precond.factor_solve(to - from);
    const double gauss =
        -0.5 * z_w.squaredNorm() - 0.5 * d * kLogTwoPi - precond.log_det_factor();
    switch (kind) {
        case SamplerKind::Rwm:
            return gauss;
        case SamplerKind::Mala: {
            const VectorXd r =
                z_w - 0.5 * precond.factor_transpose_apply(
                          target.grad_log_density(from));
            return -0.5 * r.squaredNorm() - 0.5 * d * kLogTwoPi -
                   precond.log_det_factor();
        }
        case SamplerKind::BarkerCoordinatewise: {
            const VectorXd wg = precond.factor_transpose_apply(
                target.grad_log_density(from));
            double acc = gauss;
            for (int i = 0; i < d; ++i)
                acc += kLogTwo + log_logistic_cdf(wg[i] * z_w[i]);
            return acc;
        }
        case SamplerKind::BarkerGlobal: {
            const VectorXd wg = precond.factor_transpose_apply(
                target.grad_log_density(from));
            return gauss + kLogTwo + log_logistic_cdf(wg.dot(z_w));
        }
    }
    throw std::logic_error("log_proposal_density: unknown kind");
}

double log_accept_between(SamplerKind kind, const TargetDensity& target,
                          const Preconditioner& precond, const VectorXd& x,
                          const VectorXd& y) {
    const double lp_x = safe_log_density(target, x);
    const double lp_y = safe_log_density(target, y);
    if (lp_y == kNegInf) return kNegInf;
    const double fwd = log_proposal_density(kind, target, precond, x, y);
    const double rev = log_proposal_density(kind, target, precond, y, x);
    return std::min(0.0, lp_y + rev - lp_x - fwd);
}

double reversibility_residual(SamplerKind kind, const TargetDensity& target,
                              const Preconditioner& precond, const VectorXd& x,
                              const VectorXd& y) {
    const double a_xy = log_accept_between(kind, target, precond, x, y);
    const double a_yx = log_accept_between(kind, target, precond, y, x);
    if (a_xy == kNegInf && a_yx == kNegInf) return 0.0;
    const double lhs = target.log_density(x) +
                       log_proposal_density(kind, target, precond, x, y) + a_xy;
    const double rhs = target.log_density(y) +
                       log_proposal_density(kind, target, precond, y, x) + a_yx;
    if (lhs == rhs) return 0.0;  // covers the doubly -inf corner
    return std::abs(lhs - rhs);
}

Trace run_chain(const TargetDensity& target, const ChainOptions& options,
                const VectorXd& x0) {
    const int d = target.dim();
    if (x0.size() != d)
        throw std::invalid_argument("run_chain: x0 dimension mismatch");
    if (options.iterations < 1)
        throw std::invalid_argument("run_chain: iterations must be >= 1");

    const double target_accept = std::isnan(options.target_accept)
                                     ? default_target_accept(options.sampler)
                                     : options.target_accept;
    const double initial_scale = std::isnan(options.initial_scale)
                                     ? 2.38 / std::sqrt(static_cast<double>(d))
                                     : options.initial_scale;

    Rng rng(options.seed);
    const bool needs_grad = options.sampler != SamplerKind::Rwm;
    ChainState state = make_chain_state(target, x0, needs_grad);

    std::optional<AdaptState> adapt;
    Preconditioner precond = Preconditioner::identity(d, initial_scale);
    if (options.adapt) {
        AdaptOptions aopts;
        aopts.target_accept = target_accept;
        aopts.learning_exponent = options.learning_exponent;
        aopts.dense = options.dense;
        aopts.initial_log_scale = std::log(initial_scale);
        adapt.emplace(d, x0, aopts);
        precond = adapt->to_preconditioner();
    } else if (options.fixed_preconditioner) {
        if (options.fixed_preconditioner->dim() != d)
            throw std::invalid_argument("run_chain: preconditioner dimension mismatch");
        precond = *options.fixed_preconditioner;
    }

    const long long n = options.iterations;
    Trace trace;
    trace.samples.resize(n, d);
    trace.accepted.assign(static_cast<std::size_t>(n), 0);
    trace.seed = options.seed;
    trace.sampler_label = sampler_label(options.sampler);
    const bool record = options.adapt && options.record_adaptation;
    if (record) trace.adapt_history.resize(n, 1 + d);

    for (long long i = 0; i < n; ++i) {
        MHStepResult res = sampler_step(options.sampler, state, target, precond, rng);
        state = std::move(res.next_state);
        trace.samples.row(i) = state.position.transpose();
        trace.accepted[static_cast<std::size_t>(i)] = res.accepted ? 1 : 0;
        if (res.gradient_blowup) ++trace.gradient_blowups;
        if (adapt) {
            const double stat = options.binary_accept_stat
                                    ? (res.accepted ? 1.0 : 0.0)
                                    : std::exp(res.log_accept_prob);
            adapt->rm_update(stat, state.position);
            precond = adapt->to_preconditioner();
            if (record) {
                trace.adapt_history(i, 0) = adapt->global_scale();
                trace.adapt_history.row(i).tail(d) =
                    adapt->cov_diagonal().transpose();
            }
        }
    }
    return trace;
}

Trace run_chain(const TargetDensity& target, const ChainOptions& options) {
    return run_chain(target, options, VectorXd::Zero(target.dim()));
}

}  // namespace barker
