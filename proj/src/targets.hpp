#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>

namespace barker {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// A target distribution known up to an additive constant in log space.
/// Implementations are immutable after construction and safe to share
/// across concurrently running chains.
class TargetDensity {
public:
    virtual ~TargetDensity() = default;

    virtual int dim() const = 0;

    /// log pi(x) + C.  Returns -inf off support, throws on dimension
    /// mismatch or non-finite input components.
    virtual double log_density(const VectorXd& x) const = 0;

    /// grad log pi(x); x must lie in the interior of the support.
    virtual VectorXd grad_log_density(const VectorXd& x) const = 0;

protected:
    void check_input(const VectorXd& x) const;
};

/// Gaussian with independent coordinates of the given scales (unit scales by
/// default).  Includes the normalizing constant so closed-form values can be
/// asserted exactly.
class GaussianTarget final : public TargetDensity {
public:
    explicit GaussianTarget(int dim);
    explicit GaussianTarget(VectorXd scales);

    int dim() const override { return static_cast<int>(scales_.size()); }
    double log_density(const VectorXd& x) const override;
    VectorXd grad_log_density(const VectorXd& x) const override;
    const VectorXd& scales() const { return scales_; }

private:
    VectorXd scales_;
    double log_norm_const_;
};

/// One-dimensional skew-normal 2*phi(z)*Phi(eta*z) with eta >= 0.  The CDF
/// factor is evaluated through a log-CDF stable for arbitrarily large
/// negative arguments, so both the density and its gradient stay finite in
/// the large-eta regime.
class SkewNormalTarget final : public TargetDensity {
public:
    explicit SkewNormalTarget(double eta);

    int dim() const override { return 1; }
    double log_density(const VectorXd& x) const override;
    VectorXd grad_log_density(const VectorXd& x) const override;
    double eta() const { return eta_; }

private:
    double eta_;
};

/// Bayesian logistic regression posterior with an isotropic Gaussian prior.
/// Log-likelihood uses a stable softplus; the gradient is analytic:
/// X^T (y - sigmoid(X beta)) - beta / prior_variance.
class LogisticRegressionPosterior final : public TargetDensity {
public:
    LogisticRegressionPosterior(MatrixXd design, VectorXd labels,
                                double prior_variance = 25.0);

    int dim() const override { return static_cast<int>(design_.cols()); }
    double log_density(const VectorXd& beta) const override;
    VectorXd grad_log_density(const VectorXd& beta) const override;

    const MatrixXd& design() const { return design_; }
    const VectorXd& labels() const { return labels_; }
    double prior_variance() const { return prior_variance_; }

private:
    MatrixXd design_;
    VectorXd labels_;
    double prior_variance_;
};

/// Max over coordinates of the relative error between central finite
/// differences of log_density and the analytic gradient.  rel_step scales
/// the per-coordinate step as rel_step * max(1, |x_i|).
double fd_gradient_check(const TargetDensity& target, const VectorXd& x,
                         double rel_step = 1e-6);

}  // namespace barker
