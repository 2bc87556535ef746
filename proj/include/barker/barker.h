/*
 * barker: gradient-based MCMC with the Barker proposal.
 *
 * C interface to the sampling library.  Objects are opaque handles created
 * and destroyed through these functions; every fallible call returns a
 * bk_status and leaves a human-readable message in bk_last_error() on
 * failure.  Handles are immutable once created and may be shared across
 * threads; each run owns its generator, so concurrent runs with distinct
 * seeds are safe.
 */
#ifndef BARKER_BARKER_H
#define BARKER_BARKER_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bk_status {
    BK_OK = 0,
    BK_ERR_INVALID = 1, /* bad arguments or configuration */
    BK_ERR_RUNTIME = 2, /* numerical or state failure */
    BK_ERR_IO = 3       /* file could not be read or written */
} bk_status;

typedef enum bk_sampler {
    BK_SAMPLER_RWM = 0,
    BK_SAMPLER_MALA = 1,
    BK_SAMPLER_BARKER = 2,       /* coordinate-wise skewing */
    BK_SAMPLER_BARKER_GLOBAL = 3 /* single global flip */
} bk_sampler;

typedef enum bk_balancing {
    BK_BALANCING_HASTINGS = 0,
    BK_BALANCING_BARKER = 1
} bk_balancing;

/* Message describing the most recent failure on this thread. */
const char* bk_last_error(void);

/* Deterministic sub-stream derivation for parallel runs sharing one base
 * seed. */
uint64_t bk_derive_seed(uint64_t base, uint64_t stream);

/* ------------------------------------------------------------------ */
/* Targets                                                             */
/* ------------------------------------------------------------------ */

typedef struct bk_target bk_target;

/* Gaussian with independent coordinates; scales may be NULL for unit. */
bk_status bk_target_gaussian(int dim, const double* scales, bk_target** out);
/* One-dimensional skew-normal 2 phi(z) Phi(eta z), eta >= 0. */
bk_status bk_target_skew_normal(double eta, bk_target** out);
/* Logistic-regression posterior; design is row-major n x d, labels 0/1. */
bk_status bk_target_logistic(int n, int d, const double* design,
                             const double* labels, double prior_variance,
                             bk_target** out);
void bk_target_free(bk_target* target);

int bk_target_dim(const bk_target* target);
bk_status bk_log_density(const bk_target* target, const double* x, int dim,
                         double* out);
bk_status bk_grad_log_density(const bk_target* target, const double* x,
                              int dim, double* out_grad);
/* Max relative error between central differences and the gradient. */
bk_status bk_fd_gradient_check(const bk_target* target, const double* x,
                               int dim, double rel_step, double* out);

/* ------------------------------------------------------------------ */
/* Balancing functions                                                 */
/* ------------------------------------------------------------------ */

bk_status bk_eval_balancing(bk_balancing kind, double t, double* out);
bk_status bk_barker_log_balancing(double log_t, double* out);
bk_status bk_logistic_cdf(double z, double* out);
/* Max deviation of (1 + 1/t) g(t) from its value at t = 1 over the grid. */
bk_status bk_constancy_deviation(bk_balancing kind, const double* t_grid,
                                 int grid_len, double* out);
/* Monte Carlo estimate of the jump intensity; converges to 0.5. */
bk_status bk_barker_jump_rate_mc(const bk_target* target, double x,
                                 double proposal_std, long long n_samples,
                                 uint64_t seed, double* out);

/* ------------------------------------------------------------------ */
/* Datasets                                                            */
/* ------------------------------------------------------------------ */

typedef struct bk_dataset bk_dataset;

/*
 * Load a comma-separated file.  label_column is a header name or an index
 * in text form; positive_class may be NULL when labels are already 0/1;
 * missing_markers may be NULL for the default {"?", ""}.  Rows containing
 * a missing marker are dropped and counted into *dropped_rows.
 */
bk_status bk_dataset_load_csv(const char* path, const char* label_column,
                              const char* positive_class, int has_header,
                              const char* const* missing_markers,
                              int n_missing_markers, bk_dataset** out,
                              long long* dropped_rows);
bk_status bk_dataset_synthesize(long long n, int d_imbalanced, int d_regular,
                                int rare_count, double true_beta_scale,
                                uint64_t seed, bk_dataset** out);
bk_status bk_dataset_select_covariates(const bk_dataset* ds, int n_imbalanced,
                                       int n_regular, int rarity_threshold,
                                       bk_dataset** out);
bk_status bk_dataset_standardize(const bk_dataset* ds, bk_dataset** out);
long long bk_dataset_rows(const bk_dataset* ds);
int bk_dataset_cols(const bk_dataset* ds);
/* CSV snapshot plus optional JSON standardization sidecar (NULL to skip). */
bk_status bk_dataset_write_csv(const bk_dataset* ds, const char* csv_path,
                               const char* sidecar_json_path);
/* Posterior over the dataset's coefficients (+ optional intercept). */
bk_status bk_target_from_dataset(const bk_dataset* ds, double prior_variance,
                                 int include_intercept, bk_target** out);
void bk_dataset_free(bk_dataset* ds);

/* ------------------------------------------------------------------ */
/* Chains                                                              */
/* ------------------------------------------------------------------ */

typedef struct bk_trace bk_trace;

typedef struct bk_chain_config {
    bk_sampler sampler;
    long long iterations;
    uint64_t seed;
    int adapt;             /* 0: fixed identity * initial_scale */
    int precond_dense;     /* 0: diagonal covariance */
    double target_accept;  /* < 0: per-sampler default */
    double learning_exponent;
    double initial_scale;  /* < 0: 2.38 / sqrt(dim) */
    int binary_accept_stat;
    int record_adaptation;
} bk_chain_config;

/* Fills the documented defaults (adaptive, diagonal, 10000 iterations). */
void bk_chain_config_init(bk_chain_config* config);

/* Runs one chain from x0 (NULL for the zero vector). */
bk_status bk_run_chain(const bk_target* target, const bk_chain_config* config,
                       const double* x0, bk_trace** out);

long long bk_trace_iterations(const bk_trace* trace);
int bk_trace_dim(const bk_trace* trace);
/* Copies the n x d sample matrix row-major into out (length n*d). */
bk_status bk_trace_samples(const bk_trace* trace, double* out, long long len);
double bk_trace_acceptance_rate(const bk_trace* trace);
long long bk_trace_gradient_blowups(const bk_trace* trace);
bk_status bk_trace_write_csv(const bk_trace* trace, const char* path);
bk_status bk_trace_write_adaptation_csv(const bk_trace* trace,
                                        const char* path);
void bk_trace_free(bk_trace* trace);

/* ------------------------------------------------------------------ */
/* Diagnostics                                                         */
/* ------------------------------------------------------------------ */

/* Min/median effective sample size over post-burn-in coordinates; stuck
 * coordinates are counted, not raised. */
bk_status bk_trace_ess_summary(const bk_trace* trace, double burn_in_fraction,
                               double* min_ess, double* median_ess,
                               long long* n_used, int* n_stuck);
/* Max split R-hat over coordinates of a single chain (halved after
 * burn-in). */
bk_status bk_trace_split_rhat_max(const bk_trace* trace,
                                  double burn_in_fraction, double* out,
                                  int* n_stuck);
/* Split R-hat of one coordinate across several traces (>= 2). */
bk_status bk_split_rhat(const bk_trace* const* traces, int n_traces,
                        int coordinate, double* out);

/* Max split R-hat over all coordinates of one or more chains, burn-in
 * discarded per chain. */
bk_status bk_multi_split_rhat_max(const bk_trace* const* traces, int n_traces,
                                  double burn_in_fraction, double* out,
                                  int* n_stuck);

/* Per-coordinate ESS summed across independent chains, then min/median. */
bk_status bk_multi_ess_summary(const bk_trace* const* traces, int n_traces,
                               double burn_in_fraction, double* min_ess,
                               double* median_ess, long long* n_used,
                               int* n_stuck);

/* One row of the machine-readable results table. */
typedef struct bk_summary_row {
    const char* dataset_variant;
    const char* sampler;
    const char* precond_mode;
    double min_ess;
    double median_ess;
    double accept_rate;
    double rhat_max;
    const char* status; /* "ok" or "n/a" */
} bk_summary_row;

/* Fixed schema: dataset_variant,sampler,precond_mode,min_ess,median_ess,
 * accept_rate,rhat_max,status. */
bk_status bk_write_summary_csv(const char* path, const bk_summary_row* rows,
                               int n_rows);

/* ------------------------------------------------------------------ */
/* Point-wise acceptance and the jump process                          */
/* ------------------------------------------------------------------ */

/* MH acceptance probability of moving x -> y with an identity
 * preconditioner of scale step_size. */
bk_status bk_mh_alpha(const bk_target* target, bk_sampler sampler,
                      const double* x, const double* y, int dim,
                      double step_size, double* alpha);

typedef struct bk_jump_path bk_jump_path;

/* Event-driven simulation of the constant-rate jump process on a 1-D
 * target; bimodal_offset > 0 swaps the Gaussian increment density for an
 * even two-mode mixture. */
bk_status bk_jump_simulate(const bk_target* target, double proposal_std,
                           double bimodal_offset, double duration, double x0,
                           uint64_t seed, bk_jump_path** out);
long long bk_jump_path_events(const bk_jump_path* path);
bk_status bk_jump_path_write_csv(const bk_jump_path* path, const char* out);
void bk_jump_path_free(bk_jump_path* path);

/* Time-averaged second moment of a path, streamed (no storage). */
bk_status bk_jump_second_moment(const bk_target* target, double proposal_std,
                                double bimodal_offset, double duration,
                                double x0, uint64_t seed,
                                double* second_moment, long long* n_events);

/* Discrete-time skeleton chain of the same kernel. */
bk_status bk_skeleton_chain(const bk_target* target, double proposal_std,
                            double bimodal_offset, long long n_steps,
                            double x0, uint64_t seed, bk_trace** out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BARKER_BARKER_H */
