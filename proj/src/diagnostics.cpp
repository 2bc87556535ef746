#include "diagnostics.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "csv.hpp"

namespace barker {

namespace {

// Biased (1/n) autocovariances via FFT with zero padding.
std::vector<double> autocovariance(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::size_t m = 1;
    while (m < 2 * n) m <<= 1;
    const double mean =
        std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    std::vector<double> padded(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) padded[i] = x[i] - mean;

    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> freq;
    fft.fwd(freq, padded);
    for (auto& f : freq) f *= std::conj(f);
    std::vector<std::complex<double>> back;
    fft.inv(back, freq);

    std::vector<double> gamma(n);
    for (std::size_t k = 0; k < n; ++k)
        gamma[k] = back[k].real() / static_cast<double>(n);
    return gamma;
}

std::vector<double> column_segment(const Trace& trace, int coordinate,
                                   long long start) {
    const long long n = trace.iterations();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n - start));
    for (long long i = start; i < n; ++i)
        out.push_back(trace.samples(i, coordinate));
    return out;
}

long long burn_in_start(const Trace& trace, double burn_in_fraction) {
    if (!(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0))
        throw std::invalid_argument("burn_in_fraction must be in [0, 1)");
    return static_cast<long long>(
        std::floor(static_cast<double>(trace.iterations()) * burn_in_fraction));
}

bool is_constant(const std::vector<double>& x) {
    for (double v : x)
        if (v != x.front()) return false;
    return true;
}

double median_of(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

double ess(const std::vector<double>& series) {
    const std::size_t n = series.size();
    if (n < 100) throw std::invalid_argument("ess: need at least 100 samples");
    if (is_constant(series))
        throw std::runtime_error("ess: constant series (chain never moved)");
    const std::vector<double> gamma = autocovariance(series);
    const double gamma0 = gamma[0];

    // Geyer pair sums Gamma_m = rho_{2m} + rho_{2m+1}: keep while positive,
    // then enforce monotone non-increase.
    double tau = -1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; 2 * m + 1 < n; ++m) {
        double pair = (gamma[2 * m] + gamma[2 * m + 1]) / gamma0;
        if (pair <= 0.0) break;
        pair = std::min(pair, prev);
        prev = pair;
        tau += 2.0 * pair;
    }
    tau = std::max(tau, 1.0 / static_cast<double>(n));
    return static_cast<double>(n) / tau;
}

EssReport ess_summary(const Trace& trace, double burn_in_fraction) {
    if (trace.iterations() == 0) throw std::invalid_argument("ess_summary: empty trace");
    const long long start = burn_in_start(trace, burn_in_fraction);
    EssReport report;
    report.n_used = trace.iterations() - start;
    const double cap = 1.05 * static_cast<double>(report.n_used);
    std::vector<double> live;
    for (int j = 0; j < trace.dim(); ++j) {
        const auto series = column_segment(trace, j, start);
        if (is_constant(series)) {
            report.stuck.push_back(j);
            report.per_coordinate_ess.push_back(
                std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        const double e = std::min(ess(series), cap);
        report.per_coordinate_ess.push_back(e);
        live.push_back(e);
    }
    report.min_ess = live.empty() ? std::numeric_limits<double>::quiet_NaN()
                                  : *std::min_element(live.begin(), live.end());
    report.median_ess = median_of(live);
    return report;
}

double split_rhat_series(const std::vector<std::vector<double>>& chains) {
    if (chains.empty()) throw std::invalid_argument("split_rhat: no chains");
    const std::size_t len = chains.front().size();
    for (const auto& c : chains)
        if (c.size() != len)
            throw std::invalid_argument("split_rhat: chains of unequal length");
    const std::size_t half = len / 2;
    if (half < 2) throw std::invalid_argument("split_rhat: chains too short");

    std::vector<double> means, vars;
    for (const auto& c : chains) {
        for (std::size_t s = 0; s < 2; ++s) {
            const double* seg = c.data() + s * half;
            double m = 0.0;
            for (std::size_t i = 0; i < half; ++i) m += seg[i];
            m /= static_cast<double>(half);
            double v = 0.0;
            for (std::size_t i = 0; i < half; ++i)
                v += (seg[i] - m) * (seg[i] - m);
            v /= static_cast<double>(half - 1);
            means.push_back(m);
            vars.push_back(v);
        }
    }
    const std::size_t m_seq = means.size();
    const double w =
        std::accumulate(vars.begin(), vars.end(), 0.0) / static_cast<double>(m_seq);
    if (!(w > 0.0))
        throw std::runtime_error("split_rhat: zero within-chain variance");
    const double grand =
        std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(m_seq);
    double b = 0.0;
    for (double m : means) b += (m - grand) * (m - grand);
    b *= static_cast<double>(half) / static_cast<double>(m_seq - 1);
    const double nn = static_cast<double>(half);
    const double var_hat = (nn - 1.0) / nn * w + b / nn;
    return std::sqrt(var_hat / w);
}

double split_rhat(const std::vector<const Trace*>& traces, int coordinate) {
    if (traces.size() < 2)
        throw std::invalid_argument("split_rhat: need at least 2 traces");
    std::vector<std::vector<double>> chains;
    for (const Trace* t : traces) {
        if (t->iterations() < 100)
            throw std::invalid_argument("split_rhat: traces must have >= 100 rows");
        if (t->iterations() != traces.front()->iterations())
            throw std::invalid_argument("split_rhat: traces of unequal length");
        chains.push_back(column_segment(*t, coordinate, 0));
    }
    return split_rhat_series(chains);
}

RhatSummary single_chain_split_rhat(const Trace& trace,
                                    double burn_in_fraction) {
    return multi_chain_split_rhat({&trace}, burn_in_fraction);
}

RhatSummary multi_chain_split_rhat(const std::vector<const Trace*>& traces,
                                   double burn_in_fraction) {
    if (traces.empty())
        throw std::invalid_argument("multi_chain_split_rhat: no traces");
    RhatSummary summary;
    double worst = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < traces.front()->dim(); ++j) {
        std::vector<std::vector<double>> chains;
        bool stuck = false;
        for (const Trace* t : traces) {
            auto series = column_segment(*t, j, burn_in_start(*t, burn_in_fraction));
            if (is_constant(series)) stuck = true;
            chains.push_back(std::move(series));
        }
        if (stuck) {
            summary.stuck.push_back(j);
            continue;
        }
        worst = std::max(worst, split_rhat_series(chains));
    }
    summary.max_rhat = std::isfinite(worst)
                           ? worst
                           : std::numeric_limits<double>::quiet_NaN();
    return summary;
}

EssReport ess_summary_multi(const std::vector<const Trace*>& traces,
                            double burn_in_fraction) {
    if (traces.empty())
        throw std::invalid_argument("ess_summary_multi: no traces");
    EssReport pooled = ess_summary(*traces.front(), burn_in_fraction);
    for (std::size_t k = 1; k < traces.size(); ++k) {
        const EssReport next = ess_summary(*traces[k], burn_in_fraction);
        if (next.per_coordinate_ess.size() != pooled.per_coordinate_ess.size())
            throw std::invalid_argument("ess_summary_multi: dimension mismatch");
        pooled.n_used += next.n_used;
        for (std::size_t j = 0; j < pooled.per_coordinate_ess.size(); ++j)
            pooled.per_coordinate_ess[j] += next.per_coordinate_ess[j];
        for (int sj : next.stuck)
            if (std::find(pooled.stuck.begin(), pooled.stuck.end(), sj) ==
                pooled.stuck.end())
                pooled.stuck.push_back(sj);
    }
    std::vector<double> live;
    for (std::size_t j = 0; j < pooled.per_coordinate_ess.size(); ++j)
        if (std::isfinite(pooled.per_coordinate_ess[j]))
            live.push_back(pooled.per_coordinate_ess[j]);
    pooled.min_ess = live.empty() ? std::numeric_limits<double>::quiet_NaN()
                                  : *std::min_element(live.begin(), live.end());
    pooled.median_ess = median_of(live);
    std::sort(pooled.stuck.begin(), pooled.stuck.end());
    return pooled;
}

void write_summary_csv(const std::string& path,
                       const std::vector<SummaryRow>& rows) {
    std::string out =
        "dataset_variant,sampler,precond_mode,min_ess,median_ess,accept_rate,"
        "rhat_max,status\n";
    for (const auto& r : rows) {
        out += r.dataset_variant + "," + r.sampler + "," + r.precond_mode + ",";
        append_double(out, r.min_ess);
        out += ",";
        append_double(out, r.median_ess);
        out += ",";
        append_double(out, r.accept_rate);
        out += ",";
        append_double(out, r.rhat_max);
        out += "," + r.status + "\n";
    }
    write_file(path, out);
}

}  // namespace barker
