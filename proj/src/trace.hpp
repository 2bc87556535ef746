#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace barker {

/// Output of one chain: one sample row per iteration plus the acceptance
/// record and (when adaptation ran) per-iteration tuning snapshots.
/// Immutable once returned by a sampler; safe to share.
struct Trace {
    Eigen::MatrixXd samples;              // n x d
    std::vector<std::uint8_t> accepted;   // length n
    Eigen::MatrixXd adapt_history;        // n x (1 + d): lambda, diag Sigma; 0x0 if unrecorded
    std::uint64_t seed = 0;
    std::string sampler_label;
    long long gradient_blowups = 0;

    long long iterations() const { return samples.rows(); }
    int dim() const { return static_cast<int>(samples.cols()); }
    double acceptance_rate() const;

    /// Header row x0..x{d-1},accepted; one row per iteration.
    void write_csv(const std::string& path) const;
    /// Sidecar: iteration,global_scale,sigma0..sigma{d-1}.
    void write_adaptation_csv(const std::string& path) const;
};

}  // namespace barker
