#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "targets.hpp"

namespace barker {

/// Feature matrix plus binary labels.  When standardization has been
/// applied the per-column (mean, scale) record is kept so the transform is
/// invertible.
struct Dataset {
    MatrixXd features;  // n x d
    VectorXd labels;    // length n, each 0 or 1
    std::vector<std::string> column_names;
    bool standardized = false;
    VectorXd standardize_means;
    VectorXd standardize_scales;

    long long rows() const { return features.rows(); }
    int cols() const { return static_cast<int>(features.cols()); }

    /// CSV snapshot (features + label column); optional JSON sidecar with
    /// the standardization record.
    void write_csv(const std::string& csv_path,
                   const std::string& sidecar_json_path = "") const;
};

struct CsvLoadOptions {
    std::string label_column = "label";  // column name, or index as text
    bool has_header = true;
    std::vector<std::string> missing_markers = {"?", ""};
    /// When set, labels become (cell == positive_class); otherwise the label
    /// column must already be 0/1.
    std::optional<std::string> positive_class;
};

struct CsvLoadResult {
    Dataset dataset;
    long long dropped_rows = 0;  // rows removed for missing values
};

/// Comma-separated loader.  Rows containing a missing marker in any cell
/// are dropped and counted; an unparseable non-missing cell is an error
/// naming the row and column.
CsvLoadResult load_csv(const std::string& path, const CsvLoadOptions& options);

/// Reproduces the covariate-selection step: columns with at most
/// categorical_max_distinct distinct values are treated as categorical, and
/// those whose rarest category count is <= rarity_threshold qualify as
/// imbalanced.  Takes the first n_imbalanced qualifiers and the first
/// n_regular of the remaining columns, in stable column order.
Dataset select_covariates(const Dataset& ds, int n_imbalanced, int n_regular,
                          int rarity_threshold = 2,
                          int categorical_max_distinct = 10);

/// Zero mean, unit variance per column; errors on zero-variance columns.
Dataset standardize(const Dataset& ds);

/// Undoes standardize() using the stored record.
MatrixXd inverse_transform(const Dataset& ds);

/// Synthetic stand-in for the imbalanced-categorical regime: d_imbalanced
/// binary columns with exactly rare_count ones each, d_regular continuous
/// columns with scales log-uniform in [0.05, 32], labels drawn from a
/// logistic model with a random coefficient vector.  Deterministic in seed.
Dataset synthesize_imbalanced(long long n, int d_imbalanced, int d_regular,
                              int rare_count, double true_beta_scale,
                              std::uint64_t seed);

/// Posterior over the dataset's coefficients; appends an all-ones intercept
/// column (never standardized) when include_intercept is set.
LogisticRegressionPosterior make_logistic_target(const Dataset& ds,
                                                 double prior_variance = 25.0,
                                                 bool include_intercept = true);

}  // namespace barker
