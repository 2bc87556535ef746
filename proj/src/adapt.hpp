#pragma once

#include <Eigen/Dense>

#include "preconditioner.hpp"

namespace barker {

/// Robbins-Monro learning rate t^(-exponent); defined for t >= 1.
double learning_rate(long long t, double exponent);

struct AdaptOptions {
    double target_accept = 0.57;
    double learning_exponent = 0.6;
    bool dense = false;
    double initial_log_scale = 0.0;
    // scale-only iterations before the moment recursions engage
    long long covariance_warmup = 500;
    // dense mode: further diagonal-only iterations before correlations
    // accumulate, so the per-coordinate scales are in place first
    long long dense_diagonal_phase = 2500;
};

/// Jointly learned global scale and covariance forming the preconditioning
/// matrix lambda^2 * Sigma.  The scale follows the stochastic-approximation
/// recursion with step t^(-exponent).  The covariance starts at the identity
/// and is assembled as sqrt(D) R sqrt(D): per-coordinate variances D learned
/// from a short warmup onward, and (in dense mode) the correlation R of
/// scale-standardized increments averaged over the later history.
class AdaptState {
public:
    AdaptState(int dim, const VectorXd& x0, const AdaptOptions& opts);

    /// One update with the realized acceptance probability (in [0, 1]) and
    /// the current chain position.  Throws on non-finite inputs so a broken
    /// step can never poison the preconditioner silently.
    void rm_update(double accept_prob, const VectorXd& sample);

    /// Current lambda^2 (Sigma + eps I) in factored form.  eps is a small
    /// multiple of the mean diagonal so early rank-deficient estimates still
    /// factor.
    Preconditioner to_preconditioner() const;

    long long iteration() const { return iteration_; }
    double log_global_scale() const { return log_scale_; }
    double global_scale() const { return std::exp(log_scale_); }
    const VectorXd& running_mean() const { return mean_; }
    /// Composed covariance estimate sqrt(D) R sqrt(D) (dense mode).
    MatrixXd running_cov_dense() const;
    const VectorXd& running_cov_diag() const { return var_; }
    bool dense_mode() const { return dense_; }
    VectorXd cov_diagonal() const { return var_; }
    double regularization() const;

private:
    long long iteration_ = 0;
    bool dense_ = false;
    long long warmup_ = 500;
    long long diag_until_ = 3000;
    double log_scale_ = 0.0;
    double target_accept_ = 0.57;
    double exponent_ = 0.6;
    VectorXd mean_;
    VectorXd var_;    // per-coordinate variances (both modes)
    MatrixXd corr_;   // dense mode: correlation of standardized increments
};

}  // namespace barker
