#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rng.hpp"
#include "special.hpp"
#include "targets.hpp"
#include "test_support.hpp"

using namespace barker;

namespace {

VectorXd vec1(double x) {
    VectorXd v(1);
    v[0] = x;
    return v;
}

// Newton ascent with the exact logistic-posterior Hessian; strict concavity
// makes this converge from any start
VectorXd ascend_to_mode(const LogisticRegressionPosterior& t, VectorXd x) {
    const MatrixXd& design = t.design();
    for (int it = 0; it < 200; ++it) {
        const VectorXd g = t.grad_log_density(x);
        if (g.norm() < 1e-12) break;
        const VectorXd s = design * x;
        VectorXd w(s.size());
        for (Eigen::Index i = 0; i < s.size(); ++i) {
            const double p = 1.0 / (1.0 + std::exp(-s[i]));
            w[i] = p * (1.0 - p);
        }
        MatrixXd hess = design.transpose() * w.asDiagonal() * design;
        hess.diagonal().array() += 1.0 / t.prior_variance();
        x += hess.ldlt().solve(g);
    }
    return x;
}

}  // namespace

TEST_CASE("standard gaussian closed forms") {
    GaussianTarget g(1);
    CHECK(g.log_density(vec1(0.0)) ==
          doctest::Approx(-0.9189385332046727).epsilon(1e-14));
    CHECK(g.grad_log_density(vec1(1.7))[0] == doctest::Approx(-1.7));

    GaussianTarget g3(3);
    VectorXd x(3);
    x << 1.0, -2.0, 0.5;
    CHECK(g3.grad_log_density(x).isApprox(-x));
    CHECK_THROWS_AS(g3.log_density(vec1(0.0)), std::invalid_argument);
    VectorXd bad(3);
    bad << 1.0, std::nan(""), 0.0;
    CHECK_THROWS_AS(g3.log_density(bad), std::invalid_argument);
}

TEST_CASE("anisotropic gaussian gradient") {
    VectorXd s(2);
    s << 0.5, 4.0;
    GaussianTarget g(s);
    VectorXd x(2);
    x << 1.0, 1.0;
    const VectorXd grad = g.grad_log_density(x);
    CHECK(grad[0] == doctest::Approx(-4.0));
    CHECK(grad[1] == doctest::Approx(-1.0 / 16.0));
}

TEST_CASE("skew normal reduces to the gaussian at eta zero") {
    SkewNormalTarget t(0.0);
    GaussianTarget g(1);
    for (int i = 0; i <= 1000; ++i) {
        const double z = -5.0 + 10.0 * i / 1000.0;
        CHECK(std::abs(t.log_density(vec1(z)) - g.log_density(vec1(z))) < 1e-12);
    }
    CHECK_THROWS_AS(SkewNormalTarget(-0.1), std::invalid_argument);
}

TEST_CASE("skew normal gradient formula and stability") {
    SkewNormalTarget t(20.0);
    CHECK(fd_gradient_check(t, vec1(0.1)) < 1e-5);

    // eta = 50 at z = -0.5: Mills-ratio term dominates; cross-check the
    // ratio against scaled tail quadrature
    SkewNormalTarget t50(50.0);
    const double grad = t50.grad_log_density(vec1(-0.5))[0];
    const double oracle = 0.5 + 50.0 * testsupport::norm_mills_oracle(-25.0);
    CHECK(grad == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(grad > 1000.0);

    // far above the mode the gradient approaches -x
    SkewNormalTarget thuge(1e7);
    CHECK(thuge.grad_log_density(vec1(1.5))[0] == doctest::Approx(-1.5).epsilon(1e-12));

    // stability over extreme inputs
    SkewNormalTarget t4(1e4);
    for (double z : {-1e6, -100.0, -1.0, 1.0, 1e6})
        CHECK(std::isfinite(t4.log_density(vec1(z))));
}

TEST_CASE("logistic posterior closed forms") {
    MatrixXd x(1, 1);
    x << 1.0;
    VectorXd y(1);
    y << 1.0;
    LogisticRegressionPosterior post(x, y, 25.0);
    CHECK(post.log_density(vec1(0.0)) == doctest::Approx(std::log(0.5)).epsilon(1e-14));
    CHECK(post.grad_log_density(vec1(0.0))[0] == doctest::Approx(0.5).epsilon(1e-14));

    // single 0-label at beta = 10: likelihood term is -softplus(10)
    VectorXd y0(1);
    y0 << 0.0;
    LogisticRegressionPosterior post0(x, y0, 25.0);
    CHECK(post0.log_density(vec1(10.0)) ==
          doctest::Approx(-10.000045398899218 - 100.0 / 50.0).epsilon(1e-12));

    CHECK_THROWS_AS(LogisticRegressionPosterior(x, VectorXd::Ones(2), 25.0),
                    std::invalid_argument);
    VectorXd ybad(1);
    ybad << 2.0;
    CHECK_THROWS_AS(LogisticRegressionPosterior(x, ybad, 25.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(LogisticRegressionPosterior(x, y, -1.0),
                    std::invalid_argument);
}

TEST_CASE("empty logistic posterior equals the prior") {
    MatrixXd x(0, 3);
    VectorXd y(0);
    LogisticRegressionPosterior post(x, y, 25.0);
    VectorXd beta(3);
    beta << 1.0, -2.0, 4.0;
    CHECK(post.grad_log_density(beta).isApprox(-beta / 25.0));
    CHECK(post.log_density(beta) ==
          doctest::Approx(-beta.squaredNorm() / 50.0).epsilon(1e-14));
}

TEST_CASE("logistic posterior is stable for extreme linear predictors") {
    MatrixXd x(2, 1);
    x << 1.0, -1.0;
    VectorXd y(2);
    y << 1.0, 0.0;
    LogisticRegressionPosterior post(x, y, 25.0);
    CHECK(std::isfinite(post.log_density(vec1(1e4))));
    CHECK(std::isfinite(post.log_density(vec1(-1e6))));
    CHECK(std::isfinite(post.grad_log_density(vec1(1e4))[0]));
}

TEST_CASE("finite-difference gradient checks across targets") {
    Rng rng(1234);
    GaussianTarget g2(2);
    VectorXd x(2);
    x << 1.0, -2.0;
    CHECK(fd_gradient_check(g2, x) < 1e-6);

    // random interior points for each family
    for (int rep = 0; rep < 30; ++rep) {
        VectorXd p(2);
        p << 3.0 * rng.normal(), 3.0 * rng.normal();
        CHECK(fd_gradient_check(g2, p) < 1e-5);

        SkewNormalTarget sn(rep % 2 ? 1e4 : 7.0);
        CHECK(fd_gradient_check(sn, vec1(2.0 * rng.normal())) < 1e-5);
    }

    // synthetic logistic posterior
    MatrixXd xm(40, 3);
    VectorXd ym(40);
    for (int i = 0; i < 40; ++i) {
        for (int j = 0; j < 3; ++j) xm(i, j) = rng.normal();
        ym[i] = rng.bernoulli(0.4) ? 1.0 : 0.0;
    }
    LogisticRegressionPosterior post(xm, ym, 25.0);
    for (int rep = 0; rep < 20; ++rep) {
        VectorXd beta(3);
        beta << rng.normal(), rng.normal(), rng.normal();
        CHECK(fd_gradient_check(post, beta) < 1e-5);
    }
}

TEST_CASE("logistic posterior mode reached by ascent has tiny gradient") {
    Rng rng(99);
    MatrixXd xm(25, 2);
    VectorXd ym(25);
    for (int i = 0; i < 25; ++i) {
        xm(i, 0) = rng.normal();
        xm(i, 1) = rng.normal() * 3.0;
        ym[i] = rng.bernoulli(0.5) ? 1.0 : 0.0;
    }
    LogisticRegressionPosterior post(xm, ym, 25.0);
    const VectorXd mode = ascend_to_mode(post, VectorXd::Zero(2));
    CHECK(post.grad_log_density(mode).norm() < 1e-8);

    // concavity spot-check: density decreases along rays from the mode
    for (int rep = 0; rep < 100; ++rep) {
        VectorXd dir(2);
        dir << rng.normal(), rng.normal();
        dir.normalize();
        const double f0 = post.log_density(mode);
        const double f1 = post.log_density(mode + 0.5 * dir);
        const double f2 = post.log_density(mode + 1.5 * dir);
        CHECK(f1 < f0);
        CHECK(f2 < f1);
    }
}
