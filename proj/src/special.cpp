#include "special.hpp"

#include <limits>

namespace barker {

namespace {

// Gauss continued fraction for the normal tail, evaluated with the modified
// Lentz scheme:  1 - Phi(t) = phi(t) * 1/(t + 1/(t + 2/(t + 3/(t + ...))))
// for t > 0.  Converges to machine precision in a few dozen terms once
// t >= ~6; we only call it for t >= 8.
double tail_cf(double t) {
    const double tiny = 1e-300;
    double f = t, c = t, d = 0.0;
    for (int n = 1; n < 400; ++n) {
        const double a = static_cast<double>(n);
        d = t + a * d;
        if (d == 0.0) d = tiny;
        c = t + a / c;
        if (c == 0.0) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return 1.0 / f;  // = (1 - Phi(t)) / phi(t)
}

constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kTailCut = -8.0;

}  // namespace

double norm_log_cdf(double u) {
    if (std::isnan(u)) throw std::invalid_argument("norm_log_cdf: NaN input");
    if (u == std::numeric_limits<double>::infinity()) return 0.0;
    if (u > kTailCut) return std::log(0.5 * std::erfc(-u * kInvSqrt2));
    return norm_log_pdf(u) + std::log(tail_cf(-u));
}

double norm_mills_ratio(double u) {
    if (std::isnan(u)) throw std::invalid_argument("norm_mills_ratio: NaN input");
    if (u > kTailCut) {
        const double log_cdf = std::log(0.5 * std::erfc(-u * kInvSqrt2));
        return std::exp(norm_log_pdf(u) - log_cdf);
    }
    return 1.0 / tail_cf(-u);
}

}  // namespace barker
