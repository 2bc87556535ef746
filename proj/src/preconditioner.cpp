#include "preconditioner.hpp"

#include <cmath>
#include <stdexcept>

namespace barker {

Preconditioner Preconditioner::identity(int dim, double global_scale) {
    return diagonal(global_scale, VectorXd::Ones(dim));
}

Preconditioner Preconditioner::diagonal(double global_scale,
                                        VectorXd sigma_diag) {
    if (!(global_scale > 0.0) || !std::isfinite(global_scale))
        throw std::invalid_argument("Preconditioner: global scale must be positive");
    if (sigma_diag.size() < 1 || !(sigma_diag.array() > 0.0).all() ||
        !sigma_diag.allFinite())
        throw std::invalid_argument("Preconditioner: Sigma diagonal must be positive");
    Preconditioner p;
    p.dim_ = static_cast<int>(sigma_diag.size());
    p.diagonal_ = true;
    p.global_scale_ = global_scale;
    p.diag_factor_ = global_scale * sigma_diag.array().sqrt();
    return p;
}

Preconditioner Preconditioner::dense(double global_scale, MatrixXd sigma) {
    if (!(global_scale > 0.0) || !std::isfinite(global_scale))
        throw std::invalid_argument("Preconditioner: global scale must be positive");
    if (sigma.rows() != sigma.cols() || sigma.rows() < 1 || !sigma.allFinite())
        throw std::invalid_argument("Preconditioner: Sigma must be square and finite");
    Eigen::LLT<MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("Preconditioner: Cholesky factorization failed");
    Preconditioner p;
    p.dim_ = static_cast<int>(sigma.rows());
    p.diagonal_ = false;
    p.global_scale_ = global_scale;
    p.factor_ = global_scale * MatrixXd(llt.matrixL());
    return p;
}

VectorXd Preconditioner::factor_apply(const VectorXd& z) const {
    if (diagonal_) return diag_factor_.cwiseProduct(z);
    return factor_.triangularView<Eigen::Lower>() * z;
}

VectorXd Preconditioner::factor_transpose_apply(const VectorXd& v) const {
    if (diagonal_) return diag_factor_.cwiseProduct(v);
    return factor_.triangularView<Eigen::Lower>().transpose() * v;
}

VectorXd Preconditioner::factor_solve(const VectorXd& v) const {
    if (diagonal_) return v.cwiseQuotient(diag_factor_);
    return factor_.triangularView<Eigen::Lower>().solve(v);
}

double Preconditioner::log_det_factor() const {
    if (diagonal_) return diag_factor_.array().log().sum();
    return factor_.diagonal().array().log().sum();
}

MatrixXd Preconditioner::reconstruct() const {
    if (diagonal_) return diag_factor_.array().square().matrix().asDiagonal();
    return factor_ * factor_.transpose();
}

}  // namespace barker
