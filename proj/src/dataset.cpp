#include "dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "csv.hpp"
#include "rng.hpp"

namespace barker {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    cells.push_back(cur);
    return cells;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

double parse_cell(const std::string& cell, std::size_t row,
                  const std::string& column) {
    const std::string t = trim(cell);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size())
        throw std::runtime_error("unparseable numeric cell '" + cell +
                                 "' at row " + std::to_string(row) +
                                 ", column " + column);
    return v;
}

}  // namespace

void Dataset::write_csv(const std::string& csv_path,
                        const std::string& sidecar_json_path) const {
    std::string out;
    for (int j = 0; j < cols(); ++j) {
        out += column_names.empty() ? ("c" + std::to_string(j)) : column_names[j];
        out += ",";
    }
    out += "label\n";
    for (long long i = 0; i < rows(); ++i) {
        for (int j = 0; j < cols(); ++j) {
            append_double(out, features(i, j));
            out += ",";
        }
        out += labels[i] > 0.5 ? "1" : "0";
        out += "\n";
    }
    write_file(csv_path, out);

    if (!sidecar_json_path.empty()) {
        std::string js = "[\n";
        for (int j = 0; j < cols(); ++j) {
            js += "  {\"column\": \"";
            js += column_names.empty() ? ("c" + std::to_string(j)) : column_names[j];
            js += "\", \"mean\": ";
            append_double(js, standardized ? standardize_means[j] : 0.0);
            js += ", \"scale\": ";
            append_double(js, standardized ? standardize_scales[j] : 1.0);
            js += j + 1 < cols() ? "},\n" : "}\n";
        }
        js += "]\n";
        write_file(sidecar_json_path, js);
    }
}

CsvLoadResult load_csv(const std::string& path, const CsvLoadOptions& options) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("dataset not found: " + path);

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line != "\r") lines.push_back(line);
    if (lines.empty()) throw std::runtime_error("empty CSV: " + path);

    std::vector<std::string> names;
    std::size_t first_data = 0;
    const std::size_t n_cols = split_line(lines[0]).size();
    if (options.has_header) {
        for (auto& c : split_line(lines[0])) names.push_back(trim(c));
        first_data = 1;
    } else {
        for (std::size_t j = 0; j < n_cols; ++j)
            names.push_back("c" + std::to_string(j));
    }

    // resolve the label column by name, falling back to a numeric index
    long long label_idx = -1;
    for (std::size_t j = 0; j < names.size(); ++j)
        if (names[j] == options.label_column) label_idx = static_cast<long long>(j);
    if (label_idx < 0) {
        char* end = nullptr;
        const long long idx = std::strtoll(options.label_column.c_str(), &end, 10);
        if (end == options.label_column.c_str() + options.label_column.size() &&
            !options.label_column.empty() && idx >= 0 &&
            idx < static_cast<long long>(n_cols))
            label_idx = idx;
    }
    if (label_idx < 0)
        throw std::runtime_error("label column absent: " + options.label_column);

    const std::set<std::string> missing(options.missing_markers.begin(),
                                        options.missing_markers.end());
    std::vector<std::vector<double>> kept;
    long long dropped = 0;
    for (std::size_t i = first_data; i < lines.size(); ++i) {
        const auto cells = split_line(lines[i]);
        if (cells.size() != n_cols)
            throw std::runtime_error("row " + std::to_string(i + 1) + " has " +
                                     std::to_string(cells.size()) +
                                     " cells, expected " + std::to_string(n_cols));
        bool has_missing = false;
        for (const auto& c : cells)
            if (missing.count(trim(c))) has_missing = true;
        if (has_missing) {
            ++dropped;
            continue;
        }
        std::vector<double> row(n_cols);
        for (std::size_t j = 0; j < n_cols; ++j) {
            if (options.positive_class &&
                static_cast<long long>(j) == label_idx) {
                row[j] = trim(cells[j]) == *options.positive_class ? 1.0 : 0.0;
            } else {
                row[j] = parse_cell(cells[j], i + 1, names[j]);
            }
        }
        kept.push_back(std::move(row));
    }

    const long long n = static_cast<long long>(kept.size());
    const int d = static_cast<int>(n_cols) - 1;
    Dataset ds;
    ds.features.resize(n, d);
    ds.labels.resize(n);
    for (long long i = 0; i < n; ++i) {
        int jj = 0;
        for (std::size_t j = 0; j < n_cols; ++j) {
            if (static_cast<long long>(j) == label_idx) {
                const double y = kept[i][j];
                if (y != 0.0 && y != 1.0)
                    throw std::runtime_error(
                        "label value " + format_double(y) +
                        " is not 0/1; pass an explicit positive class");
                ds.labels[i] = y;
            } else {
                ds.features(i, jj++) = kept[i][j];
            }
        }
    }
    for (std::size_t j = 0; j < n_cols; ++j)
        if (static_cast<long long>(j) != label_idx)
            ds.column_names.push_back(names[j]);
    return {std::move(ds), dropped};
}

Dataset select_covariates(const Dataset& ds, int n_imbalanced, int n_regular,
                          int rarity_threshold, int categorical_max_distinct) {
    const long long n = ds.rows();
    std::vector<int> imbalanced, rest;
    for (int j = 0; j < ds.cols(); ++j) {
        std::map<double, long long> counts;
        for (long long i = 0; i < n; ++i) ++counts[ds.features(i, j)];
        bool qualifies = false;
        if (static_cast<int>(counts.size()) <= categorical_max_distinct) {
            long long rarest = n;
            for (const auto& [value, count] : counts)
                rarest = std::min(rarest, count);
            qualifies = rarest <= rarity_threshold;
        }
        (qualifies ? imbalanced : rest).push_back(j);
    }
    if (static_cast<int>(imbalanced.size()) < n_imbalanced)
        throw std::runtime_error(
            "only " + std::to_string(imbalanced.size()) +
            " imbalanced covariates qualify, need " + std::to_string(n_imbalanced));
    if (static_cast<int>(rest.size()) < n_regular)
        throw std::runtime_error("only " + std::to_string(rest.size()) +
                                 " regular covariates remain, need " +
                                 std::to_string(n_regular));

    std::vector<int> chosen(imbalanced.begin(), imbalanced.begin() + n_imbalanced);
    chosen.insert(chosen.end(), rest.begin(), rest.begin() + n_regular);

    Dataset out;
    out.features.resize(n, static_cast<int>(chosen.size()));
    out.labels = ds.labels;
    for (std::size_t k = 0; k < chosen.size(); ++k) {
        out.features.col(static_cast<int>(k)) = ds.features.col(chosen[k]);
        out.column_names.push_back(ds.column_names.empty()
                                       ? "c" + std::to_string(chosen[k])
                                       : ds.column_names[chosen[k]]);
    }
    return out;
}

Dataset standardize(const Dataset& ds) {
    const long long n = ds.rows();
    if (n < 2) throw std::runtime_error("standardize: need at least 2 rows");
    Dataset out = ds;
    out.standardize_means.resize(ds.cols());
    out.standardize_scales.resize(ds.cols());
    for (int j = 0; j < ds.cols(); ++j) {
        const double mean = ds.features.col(j).mean();
        const double var =
            (ds.features.col(j).array() - mean).square().sum() / (n - 1);
        if (!(var > 0.0))
            throw std::runtime_error(
                "standardize: zero-variance column " +
                (ds.column_names.empty() ? std::to_string(j) : ds.column_names[j]));
        const double scale = std::sqrt(var);
        out.standardize_means[j] = mean;
        out.standardize_scales[j] = scale;
        out.features.col(j) = (ds.features.col(j).array() - mean) / scale;
    }
    out.standardized = true;
    return out;
}

MatrixXd inverse_transform(const Dataset& ds) {
    if (!ds.standardized)
        throw std::runtime_error("inverse_transform: dataset is not standardized");
    MatrixXd raw = ds.features;
    for (int j = 0; j < ds.cols(); ++j)
        raw.col(j) =
            raw.col(j).array() * ds.standardize_scales[j] + ds.standardize_means[j];
    return raw;
}

Dataset synthesize_imbalanced(long long n, int d_imbalanced, int d_regular,
                              int rare_count, double true_beta_scale,
                              std::uint64_t seed) {
    if (n < 1 || d_imbalanced < 0 || d_regular < 0)
        throw std::invalid_argument("synthesize_imbalanced: bad sizes");
    if (rare_count < 1 || rare_count > n / 10)
        throw std::invalid_argument(
            "synthesize_imbalanced: rare_count must be in [1, n/10]");
    Rng rng(seed);
    const int d = d_imbalanced + d_regular;
    Dataset ds;
    ds.features = MatrixXd::Zero(n, d);
    ds.labels.resize(n);

    // binary columns with exactly rare_count ones
    std::vector<long long> index(static_cast<std::size_t>(n));
    std::iota(index.begin(), index.end(), 0);
    for (int j = 0; j < d_imbalanced; ++j) {
        for (int k = 0; k < rare_count; ++k) {
            const long long pick =
                k + static_cast<long long>(rng.uniform() * static_cast<double>(n - k));
            std::swap(index[static_cast<std::size_t>(k)],
                      index[static_cast<std::size_t>(pick)]);
            ds.features(index[static_cast<std::size_t>(k)], j) = 1.0;
        }
        ds.column_names.push_back("imb" + std::to_string(j));
    }

    // Continuous columns with scales log-uniform in [0.05, 32] and means
    // several times the scale, like raw measured covariates.  The shared
    // mean direction leaves the raw design close to collinear, which is
    // exactly what standardization later removes.
    const double lo = std::log(0.05), hi = std::log(32.0);
    VectorXd col_scale(d);
    col_scale.head(d_imbalanced).setOnes();
    for (int j = 0; j < d_regular; ++j) {
        const double s = std::exp(lo + rng.uniform() * (hi - lo));
        const double mean =
            (rng.bernoulli(0.5) ? 1.0 : -1.0) * (3.0 + 9.0 * rng.uniform()) * s;
        col_scale[d_imbalanced + j] = s;
        for (long long i = 0; i < n; ++i)
            ds.features(i, d_imbalanced + j) = mean + s * rng.normal();
        ds.column_names.push_back("reg" + std::to_string(j));
    }

    // coefficients sized so the linear predictor stays informative without
    // saturating; imbalanced coefficients carry the full scale
    VectorXd beta(d);
    for (int j = 0; j < d_imbalanced; ++j)
        beta[j] = 0.5 * true_beta_scale * rng.normal();
    for (int j = d_imbalanced; j < d; ++j)
        beta[j] = 0.1 * true_beta_scale * rng.normal() / col_scale[j];

    // labels from the centered linear predictor so classes stay balanced
    // regardless of the column means
    const VectorXd predictor = ds.features * beta;
    const double center = predictor.mean();
    for (long long i = 0; i < n; ++i) {
        const double p = 1.0 / (1.0 + std::exp(-(predictor[i] - center)));
        ds.labels[i] = rng.bernoulli(p) ? 1.0 : 0.0;
    }
    return ds;
}

LogisticRegressionPosterior make_logistic_target(const Dataset& ds,
                                                 double prior_variance,
                                                 bool include_intercept) {
    if (!include_intercept)
        return LogisticRegressionPosterior(ds.features, ds.labels, prior_variance);
    MatrixXd design(ds.rows(), ds.cols() + 1);
    design.leftCols(ds.cols()) = ds.features;
    design.col(ds.cols()).setOnes();
    return LogisticRegressionPosterior(std::move(design), ds.labels,
                                       prior_variance);
}

}  // namespace barker
