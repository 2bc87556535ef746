#pragma once

#include <Eigen/Dense>

namespace barker {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Proposal geometry lambda^2 * Sigma held in factored form L L^T with L
/// lower triangular (diagonal mode stores only the diagonal of L).
/// All samplers whiten through this factor.
class Preconditioner {
public:
    static Preconditioner identity(int dim, double global_scale = 1.0);
    static Preconditioner diagonal(double global_scale, VectorXd sigma_diag);
    /// Dense SPD covariance; throws if the Cholesky factorization fails.
    static Preconditioner dense(double global_scale, MatrixXd sigma);

    int dim() const { return dim_; }
    bool diagonal_mode() const { return diagonal_; }
    double global_scale() const { return global_scale_; }

    VectorXd factor_apply(const VectorXd& z) const;            // L z
    VectorXd factor_transpose_apply(const VectorXd& v) const;  // L^T v
    VectorXd factor_solve(const VectorXd& v) const;            // L^{-1} v
    double log_det_factor() const;

    /// lambda^2 * Sigma rebuilt from the stored factor.
    MatrixXd reconstruct() const;

private:
    Preconditioner() = default;

    int dim_ = 0;
    bool diagonal_ = true;
    double global_scale_ = 1.0;
    VectorXd diag_factor_;  // diagonal mode
    MatrixXd factor_;       // dense mode, lower triangular
};

}  // namespace barker
