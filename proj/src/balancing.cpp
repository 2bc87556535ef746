#include "balancing.hpp"

#include <cmath>
#include <stdexcept>

#include "rng.hpp"
#include "special.hpp"

namespace barker {

double eval_balancing(BalancingKind kind, double t) {
    if (std::isnan(t) || t < 0.0)
        throw std::invalid_argument("eval_balancing: t must be >= 0");
    switch (kind) {
        case BalancingKind::Hastings:
            return std::min(1.0, t);
        case BalancingKind::Barker:
            if (t == 0.0) return 0.0;
            // two forms so neither 1+t nor 1/t can overflow the result
            return t <= 1.0 ? t / (1.0 + t) : 1.0 / (1.0 + 1.0 / t);
    }
    throw std::logic_error("eval_balancing: unknown kind");
}

double barker_log_balancing(double log_t) {
    if (std::isnan(log_t))
        throw std::invalid_argument("barker_log_balancing: NaN input");
    return -softplus(-log_t);
}

double constancy_deviation(BalancingKind kind,
                           std::span<const double> t_grid) {
    const double ref = 2.0 * eval_balancing(kind, 1.0);
    double worst = 0.0;
    for (double t : t_grid) {
        if (!(t > 0.0))
            throw std::invalid_argument("constancy_deviation: grid values must be > 0");
        const double v = (1.0 + 1.0 / t) * eval_balancing(kind, t);
        worst = std::max(worst, std::abs(v - ref));
    }
    return worst;
}

double barker_jump_rate_mc(const TargetDensity& target, double x,
                           double proposal_std, long long n_samples,
                           std::uint64_t seed) {
    if (target.dim() != 1)
        throw std::invalid_argument("barker_jump_rate_mc: 1-D targets only");
    if (n_samples < 1)
        throw std::invalid_argument("barker_jump_rate_mc: n_samples must be >= 1");
    VectorXd xv(1);
    xv[0] = x;
    const double beta = target.grad_log_density(xv)[0];
    Rng rng(seed);
    double acc = 0.0;
    for (long long i = 0; i < n_samples; ++i) {
        const double z = proposal_std * rng.normal();
        acc += logistic_cdf(beta * z);  // g_B(e^u) = F_L(u)
    }
    return acc / static_cast<double>(n_samples);
}

}  // namespace barker
