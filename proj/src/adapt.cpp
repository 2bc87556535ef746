#include "adapt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace barker {

double learning_rate(long long t, double exponent) {
    if (t < 1) throw std::invalid_argument("learning_rate: t must be >= 1");
    return std::pow(static_cast<double>(t), -exponent);
}

AdaptState::AdaptState(int dim, const VectorXd& x0, const AdaptOptions& opts)
    : dense_(opts.dense),
      warmup_(std::max<long long>(0, opts.covariance_warmup)),
      diag_until_(std::max<long long>(0, opts.covariance_warmup) +
                  (opts.dense ? std::max<long long>(0, opts.dense_diagonal_phase)
                              : 0)),
      log_scale_(opts.initial_log_scale),
      target_accept_(opts.target_accept),
      exponent_(opts.learning_exponent),
      mean_(x0) {
    if (dim < 1 || x0.size() != dim)
        throw std::invalid_argument("AdaptState: bad dimension");
    if (!(target_accept_ > 0.0 && target_accept_ < 1.0))
        throw std::invalid_argument("AdaptState: target acceptance must be in (0,1)");
    var_ = VectorXd::Ones(dim);
    if (dense_) corr_ = MatrixXd::Identity(dim, dim);
}

void AdaptState::rm_update(double accept_prob, const VectorXd& sample) {
    if (!std::isfinite(accept_prob) || accept_prob < 0.0 || accept_prob > 1.0)
        throw std::invalid_argument("rm_update: acceptance statistic outside [0,1]");
    if (sample.size() != mean_.size() || !sample.allFinite())
        throw std::invalid_argument("rm_update: non-finite or mis-sized sample");
    ++iteration_;
    const double gamma = learning_rate(iteration_, exponent_);
    log_scale_ += gamma * (accept_prob - target_accept_);
    // Mean and per-coordinate variances hold through a short warmup, then
    // average the remaining history (capped so the first updates cannot
    // collapse the state onto a handful of samples).
    if (iteration_ <= warmup_) return;
    const double gamma_moment =
        std::min(0.1, 1.0 / static_cast<double>(iteration_ - warmup_));
    const VectorXd delta = sample - mean_;
    mean_ += gamma_moment * delta;
    var_ += gamma_moment * (delta.array().square().matrix() - var_);
    // Correlations wait until the per-coordinate scales are in place, then
    // average the whole remaining history: a recency-weighted d x d estimate
    // rests on too few effective samples to precondition with.
    if (dense_ && iteration_ > diag_until_) {
        const double gamma_corr =
            std::min(0.1, 1.0 / static_cast<double>(iteration_ - diag_until_));
        const VectorXd scaled = delta.array() / var_.array().sqrt().max(1e-150);
        corr_ += gamma_corr * (scaled * scaled.transpose() - corr_);
    }
}

double AdaptState::regularization() const {
    const double mean_diag = cov_diagonal().mean();
    return std::max(1e-6 * mean_diag, 1e-10);
}

MatrixXd AdaptState::running_cov_dense() const {
    // correlations enter shrunk toward the identity; the raw estimate from a
    // finite, autocorrelated history is noisy enough to destabilize the
    // factor in its small directions
    const double keep = 0.5;
    const VectorXd root = var_.array().sqrt();
    MatrixXd corr = keep * corr_;
    corr.diagonal().array() += 1.0 - keep;
    return root.asDiagonal() * corr * root.asDiagonal();
}

Preconditioner AdaptState::to_preconditioner() const {
    const double eps = regularization();
    const double lambda = std::exp(log_scale_);
    if (!std::isfinite(lambda))
        throw std::runtime_error("to_preconditioner: global scale overflow");
    if (dense_) {
        MatrixXd sigma = running_cov_dense();
        sigma.diagonal().array() += eps;
        return Preconditioner::dense(lambda, std::move(sigma));
    }
    return Preconditioner::diagonal(lambda, var_.array() + eps);
}

}  // namespace barker
