#pragma once

#include <cmath>
#include <stdexcept>

namespace barker {

inline constexpr double kLogTwoPi = 1.8378770664093454836;  // log(2*pi)
inline constexpr double kLogTwo = 0.6931471805599453094;

/// log(1 + e^x), safe for |x| up to 1e6 and beyond.
inline double softplus(double x) {
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

/// Logistic CDF F_L(z) = 1/(1+e^{-z}); satisfies F_L(z) + F_L(-z) = 1.
inline double logistic_cdf(double z) {
    if (std::isnan(z)) throw std::invalid_argument("logistic_cdf: NaN input");
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

/// log F_L(z) = -softplus(-z).
inline double log_logistic_cdf(double z) {
    if (std::isnan(z)) throw std::invalid_argument("log_logistic_cdf: NaN input");
    return -softplus(-z);
}

inline double norm_log_pdf(double z) { return -0.5 * z * z - 0.5 * kLogTwoPi; }

double norm_log_cdf(double u);

/// Mills ratio phi(u)/Phi(u); grows like -u for u -> -infinity but stays
/// finite, which is what keeps the skew-normal gradient evaluable at large
/// skewness.
double norm_mills_ratio(double u);

}  // namespace barker
