#include "targets.hpp"

#include <cmath>
#include <stdexcept>

#include "special.hpp"

namespace barker {

void TargetDensity::check_input(const VectorXd& x) const {
    if (static_cast<int>(x.size()) != dim())
        throw std::invalid_argument("target: input has length " +
                                    std::to_string(x.size()) + ", expected " +
                                    std::to_string(dim()));
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (!std::isfinite(x[i]))
            throw std::invalid_argument("target: non-finite input component");
}

GaussianTarget::GaussianTarget(int dim) : GaussianTarget(VectorXd::Ones(dim)) {}

GaussianTarget::GaussianTarget(VectorXd scales) : scales_(std::move(scales)) {
    if (scales_.size() < 1 || (scales_.array() <= 0.0).any())
        throw std::invalid_argument("GaussianTarget: scales must be positive");
    log_norm_const_ =
        -0.5 * scales_.size() * kLogTwoPi - scales_.array().log().sum();
}

double GaussianTarget::log_density(const VectorXd& x) const {
    check_input(x);
    return log_norm_const_ - 0.5 * (x.array() / scales_.array()).square().sum();
}

VectorXd GaussianTarget::grad_log_density(const VectorXd& x) const {
    check_input(x);
    return (-x.array() / scales_.array().square()).matrix();
}

SkewNormalTarget::SkewNormalTarget(double eta) : eta_(eta) {
    if (!(eta >= 0.0))
        throw std::invalid_argument("SkewNormalTarget: eta must be >= 0");
}

double SkewNormalTarget::log_density(const VectorXd& x) const {
    check_input(x);
    const double z = x[0];
    return kLogTwo + norm_log_pdf(z) + norm_log_cdf(eta_ * z);
}

VectorXd SkewNormalTarget::grad_log_density(const VectorXd& x) const {
    check_input(x);
    const double z = x[0];
    VectorXd g(1);
    g[0] = -z + eta_ * norm_mills_ratio(eta_ * z);
    return g;
}

LogisticRegressionPosterior::LogisticRegressionPosterior(MatrixXd design,
                                                         VectorXd labels,
                                                         double prior_variance)
    : design_(std::move(design)),
      labels_(std::move(labels)),
      prior_variance_(prior_variance) {
    if (design_.rows() != labels_.size())
        throw std::invalid_argument(
            "LogisticRegressionPosterior: rows(X) != length(y)");
    if (design_.cols() < 1)
        throw std::invalid_argument("LogisticRegressionPosterior: empty design");
    if (!(prior_variance_ > 0.0))
        throw std::invalid_argument(
            "LogisticRegressionPosterior: prior variance must be positive");
    for (Eigen::Index i = 0; i < labels_.size(); ++i)
        if (labels_[i] != 0.0 && labels_[i] != 1.0)
            throw std::invalid_argument(
                "LogisticRegressionPosterior: labels must be in {0,1}");
}

double LogisticRegressionPosterior::log_density(const VectorXd& beta) const {
    check_input(beta);
    double ll = 0.0;
    if (design_.rows() > 0) {
        const VectorXd s = design_ * beta;
        for (Eigen::Index i = 0; i < s.size(); ++i)
            ll += labels_[i] * s[i] - softplus(s[i]);
    }
    return ll - beta.squaredNorm() / (2.0 * prior_variance_);
}

VectorXd LogisticRegressionPosterior::grad_log_density(
    const VectorXd& beta) const {
    check_input(beta);
    VectorXd g = -beta / prior_variance_;
    if (design_.rows() > 0) {
        const VectorXd s = design_ * beta;
        VectorXd resid(s.size());
        for (Eigen::Index i = 0; i < s.size(); ++i)
            resid[i] = labels_[i] - logistic_cdf(s[i]);
        g.noalias() += design_.transpose() * resid;
    }
    return g;
}

double fd_gradient_check(const TargetDensity& target, const VectorXd& x,
                         double rel_step) {
    const VectorXd grad = target.grad_log_density(x);
    double worst = 0.0;
    VectorXd xp = x, xm = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double h = rel_step * std::max(1.0, std::abs(x[i]));
        xp[i] = x[i] + h;
        xm[i] = x[i] - h;
        const double fd =
            (target.log_density(xp) - target.log_density(xm)) / (2.0 * h);
        xp[i] = x[i];
        xm[i] = x[i];
        const double err =
            std::abs(fd - grad[i]) / std::max(1.0, std::abs(grad[i]));
        worst = std::max(worst, err);
    }
    return worst;
}

}  // namespace barker
