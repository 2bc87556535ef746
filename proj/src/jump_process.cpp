#include "jump_process.hpp"

#include <cmath>
#include <stdexcept>

#include "csv.hpp"
#include "special.hpp"

namespace barker {

GaussianIncrement::GaussianIncrement(double stddev) : std_(stddev) {
    if (!(stddev > 0.0))
        throw std::invalid_argument("GaussianIncrement: stddev must be > 0");
}

double GaussianIncrement::sample(Rng& rng) const { return std_ * rng.normal(); }

double GaussianIncrement::density(double z) const {
    return std::exp(log_density(z));
}

double GaussianIncrement::log_density(double z) const {
    const double u = z / std_;
    return norm_log_pdf(u) - std::log(std_);
}

BimodalGaussianIncrement::BimodalGaussianIncrement(double mode_offset,
                                                   double stddev)
    : offset_(std::abs(mode_offset)), std_(stddev) {
    if (!(stddev > 0.0))
        throw std::invalid_argument("BimodalGaussianIncrement: stddev must be > 0");
}

double BimodalGaussianIncrement::sample(Rng& rng) const {
    const double center = rng.bernoulli(0.5) ? offset_ : -offset_;
    return center + std_ * rng.normal();
}

double BimodalGaussianIncrement::density(double z) const {
    const double a = (z - offset_) / std_;
    const double b = (z + offset_) / std_;
    return 0.5 / (std_ * std::sqrt(2.0 * M_PI)) *
           (std::exp(-0.5 * a * a) + std::exp(-0.5 * b * b));
}

double BimodalGaussianIncrement::log_density(double z) const {
    return std::log(density(z));
}

double sample_skew_symmetric_increment(double beta, const IncrementDensity& q,
                                       Rng& rng) {
    const double xi = q.sample(rng);
    const double b = rng.bernoulli(logistic_cdf(beta * xi)) ? 1.0 : -1.0;
    return b * xi;
}

double jump_kernel_density(double z, double beta, const IncrementDensity& q) {
    return 2.0 * logistic_cdf(beta * z) * q.density(z);
}

void JumpPath::write_csv(const std::string& path) const {
    std::string out = "event_time,state\n";
    out.reserve(out.size() + times.size() * 40 + 40);
    append_double(out, 0.0);
    out += ",";
    append_double(out, initial_state);
    out += "\n";
    for (std::size_t i = 0; i < times.size(); ++i) {
        append_double(out, times[i]);
        out += ",";
        append_double(out, states[i]);
        out += "\n";
    }
    write_file(path, out);
}

namespace {

double gradient_at(const TargetDensity& target, double x) {
    VectorXd xv(1);
    xv[0] = x;
    const double beta = target.grad_log_density(xv)[0];
    if (!std::isfinite(beta))
        throw std::runtime_error("jump process: non-finite gradient at state " +
                                 format_double(x));
    return beta;
}

// Shared event loop.  The observer sees every event as
// (event_time, new_state, hold_time_of_previous_state) and finally the
// censored hold of the last state.
template <typename OnEvent, typename OnCensored>
void run_events(const TargetDensity& target, const IncrementDensity& q,
                double duration, double x0, std::uint64_t seed,
                OnEvent&& on_event, OnCensored&& on_censored) {
    if (!(duration > 0.0))
        throw std::invalid_argument("jump process: duration must be > 0");
    if (target.dim() != 1)
        throw std::invalid_argument("jump process: 1-D targets only");
    Rng hold_rng(derive_seed(seed, 0));
    Rng incr_rng(derive_seed(seed, 1));
    double t = 0.0;
    double x = x0;
    for (;;) {
        const double tau = hold_rng.exponential(kJumpRate);
        if (t + tau > duration) {
            on_censored(duration - t, x);
            return;
        }
        t += tau;
        const double beta = gradient_at(target, x);
        const double z = sample_skew_symmetric_increment(beta, q, incr_rng);
        x += z;
        on_event(t, x, tau);
    }
}

}  // namespace

JumpPath simulate_jump_process(const TargetDensity& target,
                               const IncrementDensity& q, double duration,
                               double x0, std::uint64_t seed) {
    JumpPath path;
    path.initial_state = x0;
    path.total_duration = duration;
    run_events(
        target, q, duration, x0, seed,
        [&](double t, double x, double) {
            path.times.push_back(t);
            path.states.push_back(x);
        },
        [](double, double) {});
    return path;
}

Trace skeleton_chain(const TargetDensity& target, const IncrementDensity& q,
                     long long n_steps, double x0, std::uint64_t seed) {
    if (n_steps < 1)
        throw std::invalid_argument("skeleton_chain: n_steps must be >= 1");
    if (target.dim() != 1)
        throw std::invalid_argument("skeleton_chain: 1-D targets only");
    Rng incr_rng(derive_seed(seed, 1));
    Trace trace;
    trace.samples.resize(n_steps, 1);
    trace.accepted.assign(static_cast<std::size_t>(n_steps), 1);
    trace.seed = seed;
    trace.sampler_label = "skeleton";
    double x = x0;
    for (long long i = 0; i < n_steps; ++i) {
        const double beta = gradient_at(target, x);
        x += sample_skew_symmetric_increment(beta, q, incr_rng);
        trace.samples(i, 0) = x;
    }
    return trace;
}

JumpMomentEstimate jump_time_average_second_moment(const TargetDensity& target,
                                                   const IncrementDensity& q,
                                                   double duration, double x0,
                                                   std::uint64_t seed) {
    double weighted = 0.0;
    double prev_state = x0;
    JumpMomentEstimate est;
    run_events(
        target, q, duration, x0, seed,
        [&](double, double x, double tau) {
            weighted += prev_state * prev_state * tau;
            prev_state = x;
            ++est.n_events;
        },
        [&](double censored, double x) { weighted += x * x * censored; });
    est.second_moment = weighted / duration;
    return est;
}

}  // namespace barker
