#pragma once

#include <string>
#include <vector>

#include "trace.hpp"

namespace barker {

/// Effective sample size of one scalar series: n / (1 + 2 sum rho_k), with
/// the autocorrelation sum truncated by the initial monotone positive
/// pair-sum rule.  Anticorrelated series can legitimately return more than
/// n.  Throws on constant series (the chain never moved).
double ess(const std::vector<double>& series);

struct EssReport {
    std::vector<double> per_coordinate_ess;  // capped at 1.05 * n_used
    double min_ess = 0.0;     // over non-stuck coordinates; NaN if all stuck
    double median_ess = 0.0;  // idem
    long long n_used = 0;
    std::vector<int> stuck;   // coordinates constant after burn-in

    bool any_stuck() const { return !stuck.empty(); }
};

/// Per-coordinate ESS on the post-burn-in segment.  Stuck coordinates are
/// flagged rather than raised, matching how failed runs are reported.
EssReport ess_summary(const Trace& trace, double burn_in_fraction);

/// Split potential-scale-reduction over a set of scalar chains of equal
/// length: each chain is halved, then the usual between/within comparison
/// runs over the 2m half-sequences.  Values down to ~sqrt((n-1)/n) occur
/// for indistinguishable chains.
double split_rhat_series(const std::vector<std::vector<double>>& chains);

/// Split R-hat of one coordinate across two or more traces.
double split_rhat(const std::vector<const Trace*>& traces, int coordinate);

struct RhatSummary {
    double max_rhat = 0.0;   // over non-stuck coordinates; NaN if all stuck
    std::vector<int> stuck;  // zero-variance coordinates

    bool any_stuck() const { return !stuck.empty(); }
};

/// Max split R-hat over all coordinates of a single post-burn-in chain.
RhatSummary single_chain_split_rhat(const Trace& trace,
                                    double burn_in_fraction);

/// Max split R-hat over all coordinates of several equal-length chains
/// (each halved after burn-in).  The equilibrium proxy used to declare a
/// run ok or failed.
RhatSummary multi_chain_split_rhat(const std::vector<const Trace*>& traces,
                                   double burn_in_fraction);

/// Per-coordinate ESS summed over independent chains.
EssReport ess_summary_multi(const std::vector<const Trace*>& traces,
                            double burn_in_fraction);

/// One row of the machine-readable results table.
struct SummaryRow {
    std::string dataset_variant;
    std::string sampler;
    std::string precond_mode;
    double min_ess = 0.0;
    double median_ess = 0.0;
    double accept_rate = 0.0;
    double rhat_max = 0.0;
    std::string status;  // "ok" or "n/a"
};

/// Fixed schema: dataset_variant,sampler,precond_mode,min_ess,median_ess,
/// accept_rate,rhat_max,status.
void write_summary_csv(const std::string& path,
                       const std::vector<SummaryRow>& rows);

}  // namespace barker
