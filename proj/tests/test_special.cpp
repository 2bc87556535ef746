#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "special.hpp"
#include "test_support.hpp"

using namespace barker;

TEST_CASE("softplus matches naive form in the safe range") {
    for (double x : {-30.0, -3.0, -0.1, 0.0, 0.1, 3.0, 30.0})
        CHECK(softplus(x) == doctest::Approx(std::log1p(std::exp(x))).epsilon(1e-14));
    CHECK(softplus(10.0) == doctest::Approx(10.000045398899218).epsilon(1e-13));
    CHECK(softplus(1000.0) == 1000.0);
    CHECK(softplus(-1000.0) == 0.0);
    CHECK(std::isfinite(softplus(1e6)));
}

TEST_CASE("logistic cdf symmetry and fixed points") {
    CHECK(logistic_cdf(0.0) == 0.5);
    CHECK(logistic_cdf(std::log(0.25)) == doctest::Approx(0.2).epsilon(1e-14));
    for (double z : {1e-8, 0.3, 2.0, 17.0, 300.0, 1e5})
        CHECK(std::abs(logistic_cdf(z) + logistic_cdf(-z) - 1.0) < 1e-15);
    CHECK(logistic_cdf(-800.0) >= 0.0);
    CHECK(logistic_cdf(-800.0) < 1e-300);
    CHECK(!std::isnan(logistic_cdf(-800.0)));
    CHECK(logistic_cdf(std::numeric_limits<double>::infinity()) == 1.0);
    CHECK(logistic_cdf(-std::numeric_limits<double>::infinity()) == 0.0);
    CHECK_THROWS_AS(logistic_cdf(std::nan("")), std::invalid_argument);
}

TEST_CASE("normal log cdf against quadrature across the tail switch") {
    // scaled tail quadrature as an independent oracle
    for (double u : {-3000.0, -30.0, -25.0, -12.0, -8.5, -7.9, -4.0, -1.0, 0.0,
                     1.5, 6.0}) {
        const double oracle = testsupport::norm_log_cdf_oracle(u);
        CHECK(norm_log_cdf(u) == doctest::Approx(oracle).epsilon(1e-11));
    }
    CHECK(norm_log_cdf(0.0) == doctest::Approx(std::log(0.5)).epsilon(1e-15));
    CHECK(norm_log_cdf(9.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::isfinite(norm_log_cdf(-1e10)));
}

TEST_CASE("mills ratio consistent with log cdf derivative") {
    for (double u : {-40.0, -25.0, -9.0, -8.0001, -7.9999, -2.0, 0.0, 3.0}) {
        const double h = 1e-6 * std::max(1.0, std::abs(u));
        const double fd = (norm_log_cdf(u + h) - norm_log_cdf(u - h)) / (2.0 * h);
        CHECK(norm_mills_ratio(u) == doctest::Approx(fd).epsilon(1e-8));
    }
    // far tail behaves like -u
    CHECK(norm_mills_ratio(-1e8) == doctest::Approx(1e8).epsilon(1e-10));
}
