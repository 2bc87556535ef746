// Acceptance suite: runs every headline requirement end to end and prints
// one pass/fail line per criterion.  The experiment-grid and determinism
// criteria drive the command-line binary, whose path is argv[1].

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "balancing.hpp"
#include "csv.hpp"
#include "dataset.hpp"
#include "diagnostics.hpp"
#include "jump_process.hpp"
#include "rng.hpp"
#include "samplers.hpp"
#include "special.hpp"
#include "targets.hpp"
#include "test_support.hpp"
#include "mh_matrix_oracle.hpp"

namespace fs = std::filesystem;
using namespace barker;

namespace {

std::string g_cli_path;
int g_failures = 0;

void report(int number, const std::string& name, bool pass, double seconds,
            double budget_seconds, const std::string& detail) {
    const bool in_budget = seconds <= budget_seconds;
    const bool ok = pass && in_budget;
    if (!ok) ++g_failures;
    std::printf("[%s] criterion %2d: %s (%.1fs/%.0fs budget)%s%s\n",
                ok ? "PASS" : "FAIL", number, name.c_str(), seconds,
                budget_seconds, detail.empty() ? "" : " -- ",
                detail.c_str());
    std::fflush(stdout);
}

template <typename Fn>
void run_criterion(int number, const std::string& name, double budget_seconds,
                   Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool pass = false;
    try {
        pass = fn(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    report(number, name, pass, seconds, budget_seconds, detail);
}

std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> g(n);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i)
        g[i] = std::exp(llo + (lhi - llo) * i / (n - 1.0));
    return g;
}

VectorXd vec1(double v) {
    VectorXd x(1);
    x[0] = v;
    return x;
}

int run_cli(const std::string& args) {
    const std::string cmd = "\"" + g_cli_path + "\" " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// rows of a summary.csv keyed by (variant, sampler, precond)
struct GridSummary {
    std::map<std::string, std::pair<double, std::string>> cells;  // min_ess, status
    bool ok = false;
};

GridSummary parse_summary(const fs::path& p) {
    GridSummary g;
    std::ifstream in(p);
    if (!in) return g;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cur;
        for (char c : line + ",") {
            if (c == ',') {
                cells.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (cells.size() != 8) continue;
        const std::string key = cells[0] + "/" + cells[1] + "/" + cells[2];
        g.cells[key] = {std::atof(cells[3].c_str()), cells[7]};
    }
    g.ok = g.cells.size() == 8;
    return g;
}

bool criterion_balancing(std::string& detail) {
    const auto grid = log_spaced(1e-8, 1e8, 10000);
    double worst = 0.0;
    bool ordered = true;
    for (double t : grid) {
        for (auto kind : {BalancingKind::Hastings, BalancingKind::Barker}) {
            const double g = eval_balancing(kind, t);
            worst = std::max(worst, std::abs(g - t * eval_balancing(kind, 1.0 / t)));
        }
        const double gb = eval_balancing(BalancingKind::Barker, t);
        const double gh = eval_balancing(BalancingKind::Hastings, t);
        ordered = ordered && gb <= gh && gh <= 1.0;
    }
    detail = "max identity deviation " + format_double(worst);
    return worst < 1e-12 && ordered;
}

bool criterion_constancy(std::string& detail) {
    const auto grid = log_spaced(1e-8, 1e8, 10000);
    const double dev_barker = constancy_deviation(BalancingKind::Barker, grid);
    std::vector<double> with_anchors = grid;
    with_anchors.push_back(0.5);
    with_anchors.push_back(2.0);
    const double dev_hastings =
        constancy_deviation(BalancingKind::Hastings, with_anchors);
    detail = "barker " + format_double(dev_barker) + ", hastings " +
             format_double(dev_hastings);
    return dev_barker < 1e-12 && dev_hastings >= 0.5;
}

bool criterion_jump_rate(std::string& detail) {
    GaussianTarget gauss(1);
    VectorXd wide(1);
    wide << 3.0;
    GaussianTarget aniso(wide);
    SkewNormalTarget skew_small(3.0), skew_large(50.0);
    MatrixXd xm(20, 1);
    VectorXd ym(20);
    Rng data_rng(7);
    for (int i = 0; i < 20; ++i) {
        xm(i, 0) = data_rng.normal();
        ym[i] = data_rng.bernoulli(0.5) ? 1.0 : 0.0;
    }
    LogisticRegressionPosterior logit(xm, ym, 25.0);

    struct Case {
        const TargetDensity* target;
        double x, prop;
    };
    const Case cases[] = {{&gauss, 1.3, 0.8},
                          {&aniso, -2.0, 1.7},
                          {&skew_small, 0.4, 0.5},
                          {&skew_large, -0.2, 1.0},
                          {&logit, 0.9, 2.5}};
    const long long n = 1000000;
    const double tol = 3.0 * 0.5 / std::sqrt(static_cast<double>(n));
    double worst = 0.0;
    std::uint64_t seed = 100;
    for (const auto& c : cases) {
        const double est = barker_jump_rate_mc(*c.target, c.x, c.prop, n, seed++);
        worst = std::max(worst, std::abs(est - 0.5));
    }
    detail = "max |estimate - 0.5| = " + format_double(worst) + " (tol " +
             format_double(tol) + ")";
    return worst < tol;
}

bool criterion_skew_sampler(std::string& detail) {
    GaussianIncrement q(1.0);
    const std::size_t n = 100000;
    const double critical = testsupport::ks_critical_1pct(n);
    double worst_d = 0.0;
    for (double beta : {-5.0, 0.0, 0.3, 10.0}) {
        Rng rng(42);
        std::vector<double> draws(n);
        for (auto& z : draws) z = sample_skew_symmetric_increment(beta, q, rng);
        std::sort(draws.begin(), draws.end());
        double acc = 0.0, prev = -10.0, d = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += testsupport::integrate(
                [&](double z) { return jump_kernel_density(z, beta, q); }, prev,
                draws[i], 1e-10);
            prev = draws[i];
            d = std::max(d, std::abs(acc - static_cast<double>(i) / n));
            d = std::max(d, std::abs(static_cast<double>(i + 1) / n - acc));
        }
        worst_d = std::max(worst_d, d);
    }

    // two-point sketch check: P(keep) = 0.2 when beta * xi = log(1/4)
    const double xi = 1.2;
    const double beta = std::log(0.25) / xi;
    Rng rng(11);
    long long kept = 0;
    const long long m = 100000;
    for (long long i = 0; i < m; ++i)
        kept += rng.bernoulli(logistic_cdf(beta * xi)) ? 1 : 0;
    const double phat = static_cast<double>(kept) / static_cast<double>(m);
    const double se = std::sqrt(0.2 * 0.8 / static_cast<double>(m));
    detail = "max KS " + format_double(worst_d) + " (crit " +
             format_double(critical) + "), keep prob " + format_double(phat);
    return worst_d < critical && std::abs(phat - 0.2) < 3.0 * se;
}

bool criterion_reversibility(std::string& detail) {
    Rng rng(2025);
    VectorXd scales(3);
    scales << 0.4, 1.0, 3.0;
    GaussianTarget aniso(scales);
    SkewNormalTarget skew(6.0);
    MatrixXd xm(30, 3);
    VectorXd ym(30);
    for (int i = 0; i < 30; ++i) {
        for (int j = 0; j < 3; ++j) xm(i, j) = rng.normal();
        ym[i] = rng.bernoulli(0.5) ? 1.0 : 0.0;
    }
    LogisticRegressionPosterior logit(xm, ym, 25.0);
    MatrixXd corr(3, 3);
    corr << 1.0, 0.6, 0.2, 0.6, 1.5, 0.4, 0.2, 0.4, 0.8;

    double worst = 0.0;
    for (auto kind : {SamplerKind::Rwm, SamplerKind::Mala,
                      SamplerKind::BarkerCoordinatewise, SamplerKind::BarkerGlobal}) {
        for (const TargetDensity* t :
             {static_cast<const TargetDensity*>(&aniso),
              static_cast<const TargetDensity*>(&logit)}) {
            for (const auto& p : {Preconditioner::identity(3, 0.8),
                                  Preconditioner::dense(0.9, corr)}) {
                for (int rep = 0; rep < 100; ++rep) {
                    VectorXd x(3), y(3);
                    for (int j = 0; j < 3; ++j) {
                        x[j] = 1.5 * rng.normal();
                        y[j] = 1.5 * rng.normal();
                    }
                    worst = std::max(worst, reversibility_residual(kind, *t, p, x, y));
                }
            }
        }
        const Preconditioner p1 = Preconditioner::identity(1, 1.1);
        for (int rep = 0; rep < 100; ++rep) {
            worst = std::max(worst,
                             reversibility_residual(kind, skew, p1,
                                                    vec1(1.5 * rng.normal()),
                                                    vec1(1.5 * rng.normal())));
        }
    }

    // discretized-chain oracle
    GaussianTarget gauss1(1);
    SkewNormalTarget skew4(4.0);
    double worst_db = 0.0, worst_stat = 0.0;
    struct Case {
        const TargetDensity* t;
        double h, lo, hi;
    };
    const Case cases[] = {{&gauss1, 0.9, -4.1, 4.1}, {&skew4, 0.35, -1.64, 2.46}};
    for (auto kind : {SamplerKind::Rwm, SamplerKind::Mala,
                      SamplerKind::BarkerCoordinatewise, SamplerKind::BarkerGlobal}) {
        for (const auto& c : cases) {
            const auto chain = testsupport::discretize_mh(
                kind, *c.t, Preconditioner::identity(1, c.h), c.lo, c.hi, 41);
            worst_db = std::max(worst_db, testsupport::detailed_balance_residual(chain));
            worst_stat = std::max(worst_stat, testsupport::stationarity_error(chain));
        }
    }
    detail = "pointwise " + format_double(worst) + ", matrix balance " +
             format_double(worst_db) + ", stationarity " + format_double(worst_stat);
    return worst < 1e-10 && worst_db < 1e-6 && worst_stat < 1e-6;
}

bool criterion_moments(std::string& detail) {
    GaussianTarget g(10);
    double worst_mean = 0.0, worst_var = 0.0, worst_accept = 0.0;
    for (auto kind : {SamplerKind::BarkerCoordinatewise, SamplerKind::Mala}) {
        ChainOptions opts;
        opts.sampler = kind;
        opts.iterations = 200000;
        opts.seed = 2718;
        opts.record_adaptation = false;
        const Trace tr = run_chain(g, opts);
        const long long half = tr.iterations() / 2;
        long long accepted = 0;
        for (long long i = half; i < tr.iterations(); ++i)
            accepted += tr.accepted[static_cast<std::size_t>(i)];
        const double rate = static_cast<double>(accepted) / static_cast<double>(half);
        worst_accept = std::max(worst_accept,
                                std::abs(rate - default_target_accept(kind)));
        for (int j = 0; j < 10; ++j) {
            const auto seg = tr.samples.col(j).tail(half);
            const double mean = seg.mean();
            const double var = (seg.array() - mean).square().sum() / (half - 1);
            worst_mean = std::max(worst_mean, std::abs(mean));
            worst_var = std::max(worst_var, std::abs(var - 1.0));
        }
    }
    detail = "worst |mean| " + format_double(worst_mean) + ", |var-1| " +
             format_double(worst_var) + ", accept offset " +
             format_double(worst_accept);
    return worst_mean < 0.05 && worst_var < 0.1 && worst_accept < 0.05;
}

bool criterion_skew_collapse(std::string& detail) {
    const Preconditioner p = Preconditioner::identity(1, 1.0);
    double prev = 1.0 + 1e-9;
    double mala_at_1000 = 1.0, min_barker = 1.0;
    bool monotone = true;
    for (double eta : {1.0, 10.0, 100.0, 1000.0}) {
        SkewNormalTarget t(eta);
        const double a_mala = std::exp(
            log_accept_between(SamplerKind::Mala, t, p, vec1(1.5), vec1(0.0)));
        const double a_barker = std::exp(log_accept_between(
            SamplerKind::BarkerCoordinatewise, t, p, vec1(1.5), vec1(0.0)));
        monotone = monotone && a_mala <= prev;
        prev = a_mala;
        min_barker = std::min(min_barker, a_barker);
        if (eta == 1000.0) mala_at_1000 = a_mala;
    }
    detail = "mala(1000) " + format_double(mala_at_1000) + ", min barker " +
             format_double(min_barker);
    return monotone && mala_at_1000 < 1e-10 && min_barker > 0.01;
}

bool criterion_grid(std::string& detail) {
    const fs::path base = fs::temp_directory_path() / "barker_acceptance_grid";
    fs::remove_all(base);
    fs::create_directories(base);
    int barker_all4 = 0;
    int mala_fail_dense = 0, mala_fail_diag = 0;
    bool ratios_ok = true;
    double worst_ratio = 1.0;
    for (int seed = 1; seed <= 3; ++seed) {
        const fs::path out = base / ("seed" + std::to_string(seed));
        const int rc = run_cli("grid --iters 30000 --seed " + std::to_string(seed) +
                               " --out \"" + out.string() + "\"");
        if (rc != 0) {
            detail = "grid invocation failed";
            return false;
        }
        const GridSummary g = parse_summary(out / "summary.csv");
        if (!g.ok) {
            detail = "summary parse failed";
            return false;
        }
        bool all4 = true;
        for (const std::string variant : {"raw", "standardized"})
            for (const std::string precond : {"dense", "diag"})
                all4 = all4 &&
                       g.cells.at(variant + "/barker/" + precond).second == "ok";
        barker_all4 += all4 ? 1 : 0;
        mala_fail_dense += g.cells.at("raw/mala/dense").second == "n/a" ? 1 : 0;
        mala_fail_diag += g.cells.at("raw/mala/diag").second == "n/a" ? 1 : 0;
        for (const std::string variant : {"raw", "standardized"}) {
            for (const std::string precond : {"dense", "diag"}) {
                const auto& barker_cell = g.cells.at(variant + "/barker/" + precond);
                const auto& mala_cell = g.cells.at(variant + "/mala/" + precond);
                if (barker_cell.second == "ok" && mala_cell.second == "ok") {
                    const double ratio = barker_cell.first / mala_cell.first;
                    worst_ratio = std::max(worst_ratio,
                                           std::max(ratio, 1.0 / ratio));
                    ratios_ok = ratios_ok && ratio >= 0.2 && ratio <= 5.0;
                }
            }
        }
    }
    fs::remove_all(base);
    detail = "barker all-4 in " + std::to_string(barker_all4) +
             "/3 seeds; mala raw failures dense " +
             std::to_string(mala_fail_dense) + "/3, diag " +
             std::to_string(mala_fail_diag) + "/3; worst ess ratio " +
             format_double(worst_ratio);
    return barker_all4 >= 2 && mala_fail_dense >= 2 && mala_fail_diag >= 2 &&
           ratios_ok;
}

bool criterion_jump_bias(std::string& detail) {
    // event counts against Poisson(T/2) by chi-squared at 1%
    GaussianTarget target(1);
    GaussianIncrement q(0.5);
    const double horizon = 10000.0;
    const double lambda = horizon * kJumpRate;
    const int paths = 200;
    std::vector<long long> counts(paths);
    for (int k = 0; k < paths; ++k)
        counts[static_cast<std::size_t>(k)] =
            simulate_jump_process(target, q, horizon, 0.0,
                                  derive_seed(31415, static_cast<std::uint64_t>(k)))
                .events();
    const std::vector<double> quantiles{0.1, 0.2, 0.3, 0.4, 0.5,
                                        0.6, 0.7, 0.8, 0.9};
    const auto edges = testsupport::poisson_bin_edges(lambda, quantiles);
    std::vector<long long> lo_edges{-1};
    for (long long e : edges) lo_edges.push_back(e);
    double chisq = 0.0;
    for (std::size_t b = 0; b < lo_edges.size(); ++b) {
        const long long lo = lo_edges[b] + 1;
        const long long hi = b + 1 < lo_edges.size()
                                 ? lo_edges[b + 1]
                                 : static_cast<long long>(lambda + 40 * std::sqrt(lambda));
        const double expected =
            static_cast<double>(paths) *
            (b + 1 < lo_edges.size()
                 ? testsupport::poisson_mass(lo, hi, lambda)
                 : 1.0 - testsupport::poisson_mass(0, lo - 1, lambda));
        long long observed = 0;
        for (long long c : counts) observed += (c >= lo && (b + 1 == lo_edges.size() || c <= hi)) ? 1 : 0;
        chisq += (observed - expected) * (observed - expected) / expected;
    }
    const double crit = testsupport::chisq_critical_1pct(
        static_cast<int>(lo_edges.size()) - 1);

    // unadjusted bias strictly decreasing over the step grid
    double prev_bias = std::numeric_limits<double>::infinity();
    bool monotone = true;
    std::string biases;
    int idx = 0;
    for (double step : {0.4, 0.2, 0.1}) {
        GaussianIncrement qs(step);
        const auto est = jump_time_average_second_moment(
            target, qs, 6.4e7, 0.0, derive_seed(99, static_cast<std::uint64_t>(idx++)));
        const double bias = std::abs(est.second_moment - 1.0);
        monotone = monotone && bias < prev_bias;
        prev_bias = bias;
        biases += (biases.empty() ? "" : ", ") + format_double(bias);
    }
    detail = "chi-squared " + format_double(chisq) + " (crit " +
             format_double(crit) + "); biases " + biases;
    return chisq < crit && monotone;
}

bool criterion_gradient_checks(std::string& detail) {
    Rng rng(123);
    GaussianTarget g5(5);
    VectorXd scales(3);
    scales << 0.2, 1.0, 8.0;
    GaussianTarget aniso(scales);
    SkewNormalTarget sn_small(0.5), sn_mid(20.0), sn_large(1e4);
    const Dataset ds = synthesize_imbalanced(120, 6, 6, 2, 1.0, 5);
    const LogisticRegressionPosterior logit = make_logistic_target(ds, 25.0, true);

    double worst = 0.0;
    const auto check_many = [&](const TargetDensity& t, double spread) {
        for (int rep = 0; rep < 100; ++rep) {
            VectorXd x(t.dim());
            for (int j = 0; j < t.dim(); ++j) x[j] = spread * rng.normal();
            worst = std::max(worst, fd_gradient_check(t, x));
        }
    };
    check_many(g5, 2.0);
    check_many(aniso, 2.0);
    check_many(sn_small, 2.0);
    check_many(sn_mid, 1.5);
    check_many(sn_large, 1.5);
    check_many(logit, 0.7);
    detail = "worst relative error " + format_double(worst);
    return worst < 1e-5;
}

bool criterion_ess_calibration(std::string& detail) {
    std::string measured;
    bool ok = true;
    for (double phi : {0.0, 0.5, 0.9}) {
        const auto x = testsupport::ar1_series(phi, 100000, 1234);
        const double expect = 100000.0 * (1.0 - phi) / (1.0 + phi);
        const double est = ess(x);
        const double rel = std::abs(est - expect) / expect;
        ok = ok && rel < 0.15;
        measured += (measured.empty() ? "" : ", ") + format_double(rel);
    }
    detail = "relative errors " + measured;
    return ok;
}

bool criterion_determinism(std::string& detail) {
    const fs::path base = fs::temp_directory_path() / "barker_acceptance_det";
    fs::remove_all(base);
    fs::create_directories(base);
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"run", "run --target gaussian --dim 3 --iters 2000 --seed 9"},
        {"skew", "skewstudy"},
        {"jump", "jumpbias --duration 100000 --seed 4"},
        {"grid", "grid --iters 2000 --seed 6"},
    };
    for (const auto& [label, args] : commands) {
        const fs::path a = base / (label + "_a");
        const fs::path b = base / (label + "_b");
        if (run_cli(args + " --out \"" + a.string() + "\"") != 0 ||
            run_cli(args + " --out \"" + b.string() + "\"") != 0) {
            detail = label + " invocation failed";
            return false;
        }
        // every file under a must exist under b with identical bytes
        std::size_t files = 0;
        for (const auto& entry : fs::recursive_directory_iterator(a)) {
            if (!entry.is_regular_file()) continue;
            ++files;
            const fs::path rel = fs::relative(entry.path(), a);
            if (slurp(entry.path()) != slurp(b / rel)) {
                detail = label + ": " + rel.string() + " differs between runs";
                return false;
            }
        }
        if (files == 0) {
            detail = label + ": no outputs produced";
            return false;
        }
    }

    // a run reproduced purely from its config snapshot matches byte for byte
    const fs::path snap_src = base / "run_a";
    const fs::path snap_dst = base / "run_c";
    if (run_cli("run --target skew-normal --eta 7 --sampler mala --iters 1500 "
                "--seed 21 --out \"" + snap_src.string() + "\"") != 0 ||
        run_cli("run --config \"" + (snap_src / "config.txt").string() +
                "\" --out \"" + snap_dst.string() + "\"") != 0) {
        detail = "snapshot reproduction invocation failed";
        return false;
    }
    for (const char* file : {"trace.csv", "adaptation.csv", "summary.csv"}) {
        if (slurp(snap_src / file) != slurp(snap_dst / file)) {
            detail = std::string("snapshot reproduction differs: ") + file;
            return false;
        }
    }
    fs::remove_all(base);
    detail = "all command outputs byte-identical on re-run, incl. from snapshot";
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    g_cli_path = argc > 1 ? argv[1] : "build/tools/barker-cli";
    std::printf("acceptance suite (cli: %s)\n", g_cli_path.c_str());

    run_criterion(1, "balancing property and pointwise ordering", 1.0,
                  criterion_balancing);
    run_criterion(2, "constant-rate identity singles out the barker rule", 1.0,
                  criterion_constancy);
    run_criterion(3, "monte carlo jump intensity equals one half", 10.0,
                  criterion_jump_rate);
    run_criterion(4, "skew-symmetric sampler matches its kernel", 30.0,
                  criterion_skew_sampler);
    run_criterion(5, "reversibility of every mh kernel", 60.0,
                  criterion_reversibility);
    run_criterion(6, "adapted chains recover gaussian moments", 120.0,
                  criterion_moments);
    run_criterion(7, "mala acceptance collapses under skew, barker does not",
                  1.0, criterion_skew_collapse);
    run_criterion(8, "imbalanced-regression grid pattern", 900.0, criterion_grid);
    run_criterion(9, "jump process rate and vanishing bias", 120.0,
                  criterion_jump_bias);
    run_criterion(10, "finite-difference gradient checks", 10.0,
                  criterion_gradient_checks);
    run_criterion(11, "ess estimator calibration on ar(1)", 30.0,
                  criterion_ess_calibration);
    run_criterion(12, "byte-identical outputs under fixed seeds", 300.0,
                  criterion_determinism);

    if (g_failures == 0) {
        std::printf("acceptance: all criteria passed\n");
    } else {
        std::printf("acceptance: %d criterion(s) failed\n", g_failures);
    }
    return g_failures == 0 ? 0 : 1;
}
