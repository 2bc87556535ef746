#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rng.hpp"
#include "targets.hpp"
#include "trace.hpp"

namespace barker {

/// Constant jump intensity of the first-order-balanced process.
inline constexpr double kJumpRate = 0.5;

/// Symmetric 1-D increment density with a sampler.
class IncrementDensity {
public:
    virtual ~IncrementDensity() = default;
    virtual double sample(Rng& rng) const = 0;
    virtual double density(double z) const = 0;
    virtual double log_density(double z) const = 0;
};

class GaussianIncrement final : public IncrementDensity {
public:
    explicit GaussianIncrement(double stddev);
    double sample(Rng& rng) const override;
    double density(double z) const override;
    double log_density(double z) const override;
    double stddev() const { return std_; }

private:
    double std_;
};

/// Even mixture of N(-offset, stddev^2) and N(+offset, stddev^2); symmetric
/// about zero for any offset.
class BimodalGaussianIncrement final : public IncrementDensity {
public:
    BimodalGaussianIncrement(double mode_offset, double stddev);
    double sample(Rng& rng) const override;
    double density(double z) const override;
    double log_density(double z) const override;

private:
    double offset_;
    double std_;
};

/// One draw from the skew-symmetric transition density 2 F_L(beta z) q(z):
/// draw xi ~ q, keep its sign with probability F_L(beta xi), flip otherwise.
double sample_skew_symmetric_increment(double beta, const IncrementDensity& q,
                                       Rng& rng);

/// Exact transition density of the draw above.
double jump_kernel_density(double z, double beta, const IncrementDensity& q);

/// Event record of one continuous-time path.
struct JumpPath {
    double initial_state = 0.0;
    std::vector<double> times;   // strictly increasing, <= total_duration
    std::vector<double> states;  // state after each event
    double total_duration = 0.0;

    long long events() const { return static_cast<long long>(times.size()); }
    /// Columns event_time,state with a leading row for the initial state.
    void write_csv(const std::string& path) const;
};

/// Event-driven simulation over [0, duration]: holding times Exp(1/2), each
/// jump drawn from the skew-symmetric kernel at the current state's
/// gradient.  The seed feeds two independent sub-streams (holding times and
/// increments) so skeleton_chain with the same seed visits the same states.
JumpPath simulate_jump_process(const TargetDensity& target,
                               const IncrementDensity& q, double duration,
                               double x0, std::uint64_t seed);

/// Discrete-time chain applying the jump kernel directly; valid because the
/// jump intensity is constant.  No accept/reject step is involved.
Trace skeleton_chain(const TargetDensity& target, const IncrementDensity& q,
                     long long n_steps, double x0, std::uint64_t seed);

struct JumpMomentEstimate {
    double second_moment = 0.0;
    long long n_events = 0;
};

/// Time-averaged second moment of the path, streamed so long horizons need
/// no storage.  Used by the unadjusted-bias study.
JumpMomentEstimate jump_time_average_second_moment(const TargetDensity& target,
                                                   const IncrementDensity& q,
                                                   double duration, double x0,
                                                   std::uint64_t seed);

}  // namespace barker
