#include "barker/barker.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "balancing.hpp"
#include "dataset.hpp"
#include "diagnostics.hpp"
#include "jump_process.hpp"
#include "samplers.hpp"
#include "special.hpp"
#include "targets.hpp"
#include "trace.hpp"

namespace {

thread_local std::string g_last_error;

bk_status fail(bk_status code, const char* what) {
    g_last_error = what;
    return code;
}

// Runs the body, translating exceptions into status codes.
template <typename Fn>
bk_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const std::invalid_argument& e) {
        return fail(BK_ERR_INVALID, e.what());
    } catch (const std::bad_alloc&) {
        return fail(BK_ERR_RUNTIME, "out of memory");
    } catch (const std::exception& e) {
        return fail(BK_ERR_RUNTIME, e.what());
    }
}

barker::VectorXd to_vector(const double* x, int dim) {
    return Eigen::Map<const barker::VectorXd>(x, dim);
}

const barker::TargetDensity* unwrap(const bk_target* t) {
    return reinterpret_cast<const barker::TargetDensity*>(t);
}
const barker::Dataset* unwrap(const bk_dataset* d) {
    return reinterpret_cast<const barker::Dataset*>(d);
}
const barker::Trace* unwrap(const bk_trace* t) {
    return reinterpret_cast<const barker::Trace*>(t);
}
const barker::JumpPath* unwrap(const bk_jump_path* p) {
    return reinterpret_cast<const barker::JumpPath*>(p);
}

bk_status check_handle(const void* p, const char* name) {
    if (!p) return fail(BK_ERR_INVALID, name);
    return BK_OK;
}

barker::SamplerKind sampler_kind(bk_sampler s) {
    switch (s) {
        case BK_SAMPLER_RWM: return barker::SamplerKind::Rwm;
        case BK_SAMPLER_MALA: return barker::SamplerKind::Mala;
        case BK_SAMPLER_BARKER: return barker::SamplerKind::BarkerCoordinatewise;
        case BK_SAMPLER_BARKER_GLOBAL: return barker::SamplerKind::BarkerGlobal;
    }
    throw std::invalid_argument("unknown sampler kind");
}

barker::BalancingKind balancing_kind(bk_balancing b) {
    switch (b) {
        case BK_BALANCING_HASTINGS: return barker::BalancingKind::Hastings;
        case BK_BALANCING_BARKER: return barker::BalancingKind::Barker;
    }
    throw std::invalid_argument("unknown balancing kind");
}

std::unique_ptr<barker::IncrementDensity> make_increment(double proposal_std,
                                                         double bimodal_offset) {
    if (bimodal_offset > 0.0)
        return std::make_unique<barker::BimodalGaussianIncrement>(bimodal_offset,
                                                                  proposal_std);
    return std::make_unique<barker::GaussianIncrement>(proposal_std);
}

}  // namespace

extern "C" {

const char* bk_last_error(void) { return g_last_error.c_str(); }

uint64_t bk_derive_seed(uint64_t base, uint64_t stream) {
    return barker::derive_seed(base, stream);
}

/* ---------------- targets ---------------- */

bk_status bk_target_gaussian(int dim, const double* scales, bk_target** out) {
    return guarded([&]() {
        if (!out || dim < 1) return fail(BK_ERR_INVALID, "bad gaussian spec");
        barker::TargetDensity* t =
            scales ? new barker::GaussianTarget(to_vector(scales, dim))
                   : new barker::GaussianTarget(dim);
        *out = reinterpret_cast<bk_target*>(t);
        return BK_OK;
    });
}

bk_status bk_target_skew_normal(double eta, bk_target** out) {
    return guarded([&]() {
        if (!out) return fail(BK_ERR_INVALID, "null output handle");
        *out = reinterpret_cast<bk_target*>(new barker::SkewNormalTarget(eta));
        return BK_OK;
    });
}

bk_status bk_target_logistic(int n, int d, const double* design,
                             const double* labels, double prior_variance,
                             bk_target** out) {
    return guarded([&]() {
        if (!out || n < 0 || d < 1 || (n > 0 && (!design || !labels)))
            return fail(BK_ERR_INVALID, "bad logistic spec");
        barker::MatrixXd x(n, d);
        barker::VectorXd y(n);
        for (int i = 0; i < n; ++i) {
            y[i] = labels[i];
            for (int j = 0; j < d; ++j) x(i, j) = design[i * d + j];
        }
        *out = reinterpret_cast<bk_target*>(new barker::LogisticRegressionPosterior(
            std::move(x), std::move(y), prior_variance));
        return BK_OK;
    });
}

void bk_target_free(bk_target* target) {
    delete reinterpret_cast<barker::TargetDensity*>(target);
}

int bk_target_dim(const bk_target* target) {
    return target ? unwrap(target)->dim() : 0;
}

bk_status bk_log_density(const bk_target* target, const double* x, int dim,
                         double* out) {
    return guarded([&]() {
        if (check_handle(target, "null target") || !x || !out)
            return fail(BK_ERR_INVALID, "bad arguments");
        *out = unwrap(target)->log_density(to_vector(x, dim));
        return BK_OK;
    });
}

bk_status bk_grad_log_density(const bk_target* target, const double* x,
                              int dim, double* out_grad) {
    return guarded([&]() {
        if (check_handle(target, "null target") || !x || !out_grad)
            return fail(BK_ERR_INVALID, "bad arguments");
        const barker::VectorXd g =
            unwrap(target)->grad_log_density(to_vector(x, dim));
        std::memcpy(out_grad, g.data(), sizeof(double) * g.size());
        return BK_OK;
    });
}

bk_status bk_fd_gradient_check(const bk_target* target, const double* x,
                               int dim, double rel_step, double* out) {
    return guarded([&]() {
        if (check_handle(target, "null target") || !x || !out)
            return fail(BK_ERR_INVALID, "bad arguments");
        *out = barker::fd_gradient_check(*unwrap(target), to_vector(x, dim),
                                         rel_step > 0 ? rel_step : 1e-6);
        return BK_OK;
    });
}

/* ---------------- balancing ---------------- */

bk_status bk_eval_balancing(bk_balancing kind, double t, double* out) {
    return guarded([&]() {
        if (!out) return fail(BK_ERR_INVALID, "null output");
        *out = barker::eval_balancing(balancing_kind(kind), t);
        return BK_OK;
    });
}

bk_status bk_barker_log_balancing(double log_t, double* out) {
    return guarded([&]() {
        if (!out) return fail(BK_ERR_INVALID, "null output");
        *out = barker::barker_log_balancing(log_t);
        return BK_OK;
    });
}

bk_status bk_logistic_cdf(double z, double* out) {
    return guarded([&]() {
        if (!out) return fail(BK_ERR_INVALID, "null output");
        *out = barker::logistic_cdf(z);
        return BK_OK;
    });
}

bk_status bk_constancy_deviation(bk_balancing kind, const double* t_grid,
                                 int grid_len, double* out) {
    return guarded([&]() {
        if (!out || !t_grid || grid_len < 1)
            return fail(BK_ERR_INVALID, "bad grid");
        *out = barker::constancy_deviation(
            balancing_kind(kind), std::span<const double>(t_grid, grid_len));
        return BK_OK;
    });
}

bk_status bk_barker_jump_rate_mc(const bk_target* target, double x,
                                 double proposal_std, long long n_samples,
                                 uint64_t seed, double* out) {
    return guarded([&]() {
        if (check_handle(target, "null target") || !out)
            return fail(BK_ERR_INVALID, "bad arguments");
        *out = barker::barker_jump_rate_mc(*unwrap(target), x, proposal_std,
                                           n_samples, seed);
        return BK_OK;
    });
}

/* ---------------- datasets ---------------- */

bk_status bk_dataset_load_csv(const char* path, const char* label_column,
                              const char* positive_class, int has_header,
                              const char* const* missing_markers,
                              int n_missing_markers, bk_dataset** out,
                              long long* dropped_rows) {
    return guarded([&]() {
        if (!out || !path || !label_column)
            return fail(BK_ERR_INVALID, "bad arguments");
        barker::CsvLoadOptions opts;
        opts.label_column = label_column;
        opts.has_header = has_header != 0;
        if (positive_class) opts.positive_class = positive_class;
        if (missing_markers) {
            opts.missing_markers.clear();
            for (int i = 0; i < n_missing_markers; ++i)
                opts.missing_markers.push_back(missing_markers[i]);
        }
        try {
            auto result = barker::load_csv(path, opts);
            if (dropped_rows) *dropped_rows = result.dropped_rows;
            *out = reinterpret_cast<bk_dataset*>(
                new barker::Dataset(std::move(result.dataset)));
        } catch (const std::runtime_error& e) {
            return fail(std::string(e.what()).find("not found") != std::string::npos
                            ? BK_ERR_IO
                            : BK_ERR_RUNTIME,
                        e.what());
        }
        return BK_OK;
    });
}

bk_status bk_dataset_synthesize(long long n, int d_imbalanced, int d_regular,
                                int rare_count, double true_beta_scale,
                                uint64_t seed, bk_dataset** out) {
    return guarded([&]() {
        if (!out) return fail(BK_ERR_INVALID, "null output");
        *out = reinterpret_cast<bk_dataset*>(
            new barker::Dataset(barker::synthesize_imbalanced(
                n, d_imbalanced, d_regular, rare_count, true_beta_scale, seed)));
        return BK_OK;
    });
}

bk_status bk_dataset_select_covariates(const bk_dataset* ds, int n_imbalanced,
                                       int n_regular, int rarity_threshold,
                                       bk_dataset** out) {
    return guarded([&]() {
        if (check_handle(ds, "null dataset") || !out)
            return fail(BK_ERR_INVALID, "bad arguments");
        *out = reinterpret_cast<bk_dataset*>(
            new barker::Dataset(barker::select_covariates(
                *unwrap(ds), n_imbalanced, n_regular, rarity_threshold)));
        return BK_OK;
    });
}

bk_status bk_dataset_standardize(const bk_dataset* ds, bk_dataset** out) {
    return guarded([&]() {
        if (check_handle(ds, "null dataset") || !out)
            return fail(BK_ERR_INVALID, "bad arguments");
        *out = reinterpret_cast<bk_dataset*>(
            new barker::Dataset(barker::standardize(*unwrap(ds))));
        return BK_OK;
    });
}

long long bk_dataset_rows(const bk_dataset* ds) {
    return ds ? unwrap(ds)->rows() : 0;
}

int bk_dataset_cols(const bk_dataset* ds) { return ds ? unwrap(ds)->cols() : 0; }

bk_status bk_dataset_write_csv(const bk_dataset* ds, const char* csv_path,
                               const char* sidecar_json_path) {
    return guarded([&]() {
        if (check_handle(ds, "null dataset") || !csv_path)
            return fail(BK_ERR_INVALID, "bad arguments");
        unwrap(ds)->write_csv(csv_path,
                              sidecar_json_path ? sidecar_json_path : "");
        return BK_OK;
    });
}

bk_status bk_target_from_dataset(const bk_dataset* ds, double prior_variance,
                                 int include_intercept, bk_target** out) {
    return guarded([&]() {
        if (check_handle(ds, "null dataset") || !out)
            return fail(BK_ERR_INVALID, "bad arguments");
        *out = reinterpret_cast<bk_target*>(new barker::LogisticRegressionPosterior(
            barker::make_logistic_target(*unwrap(ds), prior_variance,
                                         include_intercept != 0)));
        return BK_OK;
    });
}

void bk_dataset_free(bk_dataset* ds) {
    delete reinterpret_cast<barker::Dataset*>(ds);
}

/* ---------------- chains ---------------- */

void bk_chain_config_init(bk_chain_config* config) {
    if (!config) return;
    config->sampler = BK_SAMPLER_BARKER;
    config->iterations = 10000;
    config->seed = 1;
    config->adapt = 1;
    config->precond_dense = 0;
    config->target_accept = -1.0;
    config->learning_exponent = 0.6;
    config->initial_scale = -1.0;
    config->binary_accept_stat = 0;
    config->record_adaptation = 1;
}

bk_status bk_run_chain(const bk_target* target, const bk_chain_config* config,
                       const double* x0, bk_trace** out) {
    return guarded([&]() {
        if (check_handle(target, "null target") || !config || !out)
            return fail(BK_ERR_INVALID, "bad arguments");
        barker::ChainOptions opts;
        opts.sampler = sampler_kind(config->sampler);
        opts.iterations = config->iterations;
        opts.seed = config->seed;
        opts.adapt = config->adapt != 0;
        opts.dense = config->precond_dense != 0;
        if (config->target_accept >= 0.0)
            opts.target_accept = config->target_accept;
        opts.learning_exponent = config->learning_exponent;
        if (config->initial_scale > 0.0) opts.initial_scale = config->initial_scale;
        opts.binary_accept_stat = config->binary_accept_stat != 0;
        opts.record_adaptation = config->record_adaptation != 0;
        const barker::TargetDensity& t = *unwrap(target);
        barker::Trace trace =
            x0 ? barker::run_chain(t, opts, to_vector(x0, t.dim()))
               : barker::run_chain(t, opts);
        *out = reinterpret_cast<bk_trace*>(new barker::Trace(std::move(trace)));
        return BK_OK;
    });
}

long long bk_trace_iterations(const bk_trace* trace) {
    return trace ? unwrap(trace)->iterations() : 0;
}

int bk_trace_dim(const bk_trace* trace) {
    return trace ? unwrap(trace)->dim() : 0;
}

bk_status bk_trace_samples(const bk_trace* trace, double* out, long long len) {
    return guarded([&]() {
        if (check_handle(trace, "null trace") || !out)
            return fail(BK_ERR_INVALID, "bad arguments");
        const barker::Trace& t = *unwrap(trace);
        const long long need = t.iterations() * t.dim();
        if (len < need) return fail(BK_ERR_INVALID, "output buffer too small");
        for (long long i = 0; i < t.iterations(); ++i)
            for (int j = 0; j < t.dim(); ++j) out[i * t.dim() + j] = t.samples(i, j);
        return BK_OK;
    });
}

double bk_trace_acceptance_rate(const bk_trace* trace) {
    return trace ? unwrap(trace)->acceptance_rate() : 0.0;
}

long long bk_trace_gradient_blowups(const bk_trace* trace) {
    return trace ? unwrap(trace)->gradient_blowups : 0;
}

bk_status bk_trace_write_csv(const bk_trace* trace, const char* path) {
    return guarded([&]() {
        if (check_handle(trace, "null trace") || !path)
            return fail(BK_ERR_INVALID, "bad arguments");
        unwrap(trace)->write_csv(path);
        return BK_OK;
    });
}

bk_status bk_trace_write_adaptation_csv(const bk_trace* trace,
                                        const char* path) {
    return guarded([&]() {
        if (check_handle(trace, "null trace") || !path)
            return fail(BK_ERR_INVALID, "bad arguments");
        unwrap(trace)->write_adaptation_csv(path);
        return BK_OK;
    });
}

void bk_trace_free(bk_trace* trace) {
    delete reinterpret_cast<barker::Trace*>(trace);
}

/* ---------------- diagnostics ---------------- */

bk_status bk_trace_ess_summary(const bk_trace* trace, double burn_in_fraction,
                               double* min_ess, double* median_ess,
                               long long* n_used, int* n_stuck) {
    return guarded([&]() {
        if (check_handle(trace, "null trace"))
            return fail(BK_ERR_INVALID, "null trace");
        const barker::EssReport report =
            barker::ess_summary(*unwrap(trace), burn_in_fraction);
        if (min_ess) *min_ess = report.min_ess;
        if (median_ess) *median_ess = report.median_ess;
        if (n_used) *n_used = report.n_used;
        if (n_stuck) *n_stuck = static_cast<int>(report.stuck.size());
        return BK_OK;
    });
}

bk_status bk_trace_split_rhat_max(const bk_trace* trace,
                                  double burn_in_fraction, double* out,
                                  int* n_stuck) {
    return guarded([&]() {
        if (check_handle(trace, "null trace") || !out)
            return fail(BK_ERR_INVALID, "bad arguments");
        const barker::RhatSummary summary =
            barker::single_chain_split_rhat(*unwrap(trace), burn_in_fraction);
        *out = summary.max_rhat;
        if (n_stuck) *n_stuck = static_cast<int>(summary.stuck.size());
        return BK_OK;
    });
}

bk_status bk_split_rhat(const bk_trace* const* traces, int n_traces,
                        int coordinate, double* out) {
    return guarded([&]() {
        if (!traces || !out) return fail(BK_ERR_INVALID, "bad arguments");
        std::vector<const barker::Trace*> ts;
        for (int i = 0; i < n_traces; ++i) ts.push_back(unwrap(traces[i]));
        *out = barker::split_rhat(ts, coordinate);
        return BK_OK;
    });
}

bk_status bk_multi_split_rhat_max(const bk_trace* const* traces, int n_traces,
                                  double burn_in_fraction, double* out,
                                  int* n_stuck) {
    return guarded([&]() {
        if (!traces || n_traces < 1 || !out)
            return fail(BK_ERR_INVALID, "bad arguments");
        std::vector<const barker::Trace*> ts;
        for (int i = 0; i < n_traces; ++i) ts.push_back(unwrap(traces[i]));
        const barker::RhatSummary summary =
            barker::multi_chain_split_rhat(ts, burn_in_fraction);
        *out = summary.max_rhat;
        if (n_stuck) *n_stuck = static_cast<int>(summary.stuck.size());
        return BK_OK;
    });
}

bk_status bk_multi_ess_summary(const bk_trace* const* traces, int n_traces,
                               double burn_in_fraction, double* min_ess,
                               double* median_ess, long long* n_used,
                               int* n_stuck) {
    return guarded([&]() {
        if (!traces || n_traces < 1)
            return fail(BK_ERR_INVALID, "bad arguments");
        std::vector<const barker::Trace*> ts;
        for (int i = 0; i < n_traces; ++i) ts.push_back(unwrap(traces[i]));
        const barker::EssReport report =
            barker::ess_summary_multi(ts, burn_in_fraction);
        if (min_ess) *min_ess = report.min_ess;
        if (median_ess) *median_ess = report.median_ess;
        if (n_used) *n_used = report.n_used;
        if (n_stuck) *n_stuck = static_cast<int>(report.stuck.size());
        return BK_OK;
    });
}

bk_status bk_write_summary_csv(const char* path, const bk_summary_row* rows,
                               int n_rows) {
    return guarded([&]() {
        if (!path || (!rows && n_rows > 0) || n_rows < 0)
            return fail(BK_ERR_INVALID, "bad arguments");
        std::vector<barker::SummaryRow> converted;
        converted.reserve(static_cast<std::size_t>(n_rows));
        for (int i = 0; i < n_rows; ++i) {
            const bk_summary_row& r = rows[i];
            converted.push_back({r.dataset_variant ? r.dataset_variant : "",
                                 r.sampler ? r.sampler : "",
                                 r.precond_mode ? r.precond_mode : "",
                                 r.min_ess, r.median_ess, r.accept_rate,
                                 r.rhat_max, r.status ? r.status : ""});
        }
        barker::write_summary_csv(path, converted);
        return BK_OK;
    });
}

/* ---------------- point-wise acceptance, jump process ---------------- */

bk_status bk_mh_alpha(const bk_target* target, bk_sampler sampler,
                      const double* x, const double* y, int dim,
                      double step_size, double* alpha) {
    return guarded([&]() {
        if (check_handle(target, "null target") || !x || !y || !alpha)
            return fail(BK_ERR_INVALID, "bad arguments");
        if (!(step_size > 0.0)) return fail(BK_ERR_INVALID, "step_size must be > 0");
        const barker::Preconditioner p =
            barker::Preconditioner::identity(dim, step_size);
        const double lap = barker::log_accept_between(
            sampler_kind(sampler), *unwrap(target), p, to_vector(x, dim),
            to_vector(y, dim));
        *alpha = std::exp(lap);
        return BK_OK;
    });
}

bk_status bk_jump_simulate(const bk_target* target, double proposal_std,
                           double bimodal_offset, double duration, double x0,
                           uint64_t seed, bk_jump_path** out) {
    return guarded([&]() {
        if (check_handle(target, "null target") || !out)
            return fail(BK_ERR_INVALID, "bad arguments");
        auto q = make_increment(proposal_std, bimodal_offset);
        *out = reinterpret_cast<bk_jump_path*>(
            new barker::JumpPath(barker::simulate_jump_process(
                *unwrap(target), *q, duration, x0, seed)));
        return BK_OK;
    });
}

long long bk_jump_path_events(const bk_jump_path* path) {
    return path ? unwrap(path)->events() : 0;
}

bk_status bk_jump_path_write_csv(const bk_jump_path* path, const char* out) {
    return guarded([&]() {
        if (check_handle(path, "null path") || !out)
            return fail(BK_ERR_INVALID, "bad arguments");
        unwrap(path)->write_csv(out);
        return BK_OK;
    });
}

void bk_jump_path_free(bk_jump_path* path) {
    delete reinterpret_cast<barker::JumpPath*>(path);
}

bk_status bk_jump_second_moment(const bk_target* target, double proposal_std,
                                double bimodal_offset, double duration,
                                double x0, uint64_t seed,
                                double* second_moment, long long* n_events) {
    return guarded([&]() {
        if (check_handle(target, "null target") || !second_moment)
            return fail(BK_ERR_INVALID, "bad arguments");
        auto q = make_increment(proposal_std, bimodal_offset);
        const barker::JumpMomentEstimate est =
            barker::jump_time_average_second_moment(*unwrap(target), *q,
                                                    duration, x0, seed);
        *second_moment = est.second_moment;
        if (n_events) *n_events = est.n_events;
        return BK_OK;
    });
}

bk_status bk_skeleton_chain(const bk_target* target, double proposal_std,
                            double bimodal_offset, long long n_steps,
                            double x0, uint64_t seed, bk_trace** out) {
    return guarded([&]() {
        if (check_handle(target, "null target") || !out)
            return fail(BK_ERR_INVALID, "bad arguments");
        auto q = make_increment(proposal_std, bimodal_offset);
        *out = reinterpret_cast<bk_trace*>(new barker::Trace(
            barker::skeleton_chain(*unwrap(target), *q, n_steps, x0, seed)));
        return BK_OK;
    });
}

} /* extern "C" */
