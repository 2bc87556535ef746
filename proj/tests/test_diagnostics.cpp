#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include "diagnostics.hpp"
#include "rng.hpp"
#include "test_support.hpp"

using namespace barker;

namespace {

Trace trace_from_columns(const std::vector<std::vector<double>>& cols) {
    Trace t;
    const long long n = static_cast<long long>(cols.front().size());
    t.samples.resize(n, static_cast<int>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (long long i = 0; i < n; ++i)
            t.samples(i, static_cast<int>(j)) = cols[j][static_cast<std::size_t>(i)];
    t.accepted.assign(static_cast<std::size_t>(n), 1);
    return t;
}

std::vector<double> iid_normal(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> x(n);
    for (auto& v : x) v = rng.normal();
    return x;
}

}  // namespace

TEST_CASE("ess on iid and autocorrelated series") {
    const auto iid = iid_normal(10000, 3);
    const double e = ess(iid);
    CHECK(e > 0.9 * 10000);
    CHECK(e < 1.1 * 10000);

    for (double phi : {0.0, 0.5, 0.9}) {
        const auto x = testsupport::ar1_series(phi, 100000, 17);
        const double expect = 100000.0 * (1.0 - phi) / (1.0 + phi);
        CHECK(std::abs(ess(x) - expect) / expect < 0.15);
    }
}

TEST_CASE("ess estimator majority property over seeds") {
    // closed-form AR(1) integrated autocorrelation; at least 4 of 5 seeds
    // must land within 15% for every coefficient
    for (double phi : {0.0, 0.5, 0.9}) {
        int within = 0;
        for (unsigned seed = 1; seed <= 5; ++seed) {
            const auto x = testsupport::ar1_series(phi, 100000, seed);
            const double expect = 100000.0 * (1.0 - phi) / (1.0 + phi);
            if (std::abs(ess(x) - expect) / expect < 0.15) ++within;
        }
        CHECK(within >= 4);
    }
}

TEST_CASE("multi-chain rhat and pooled ess") {
    // two chains from the same law: low rhat, ess adds up
    const Trace a = trace_from_columns({iid_normal(6000, 31), iid_normal(6000, 32)});
    const Trace b = trace_from_columns({iid_normal(6000, 33), iid_normal(6000, 34)});
    const RhatSummary same = multi_chain_split_rhat({&a, &b}, 0.5);
    CHECK(same.max_rhat < 1.02);
    CHECK(same.stuck.empty());

    const EssReport pooled = ess_summary_multi({&a, &b}, 0.5);
    CHECK(pooled.n_used == 6000);
    CHECK(pooled.min_ess > 1.7 * 3000);  // two chains' worth

    // chains in different places are flagged
    auto shifted_cols = std::vector<std::vector<double>>{iid_normal(6000, 35),
                                                         iid_normal(6000, 36)};
    for (auto& v : shifted_cols[1]) v += 4.0;
    const Trace c = trace_from_columns(shifted_cols);
    const RhatSummary apart = multi_chain_split_rhat({&a, &c}, 0.5);
    CHECK(apart.max_rhat > 1.5);

    // a coordinate stuck in just one chain is still flagged
    const Trace d = trace_from_columns({iid_normal(6000, 37),
                                        std::vector<double>(6000, 2.0)});
    const RhatSummary flagged = multi_chain_split_rhat({&a, &d}, 0.5);
    CHECK(flagged.stuck == std::vector<int>{1});
    const EssReport pooled2 = ess_summary_multi({&a, &d}, 0.5);
    CHECK(pooled2.stuck == std::vector<int>{1});
    CHECK(std::isfinite(pooled2.min_ess));
}

TEST_CASE("ess edge cases") {
    // perfectly alternating series: negative lag-1 autocorrelation pushes
    // the estimate above n
    std::vector<double> alt(5000);
    for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2 ? 1.0 : -1.0;
    CHECK(ess(alt) > static_cast<double>(alt.size()));

    std::vector<double> constant(500, 3.0);
    CHECK_THROWS_AS(ess(constant), std::runtime_error);
    std::vector<double> tiny(50, 0.0);
    CHECK_THROWS_AS(ess(tiny), std::invalid_argument);
}

TEST_CASE("ess summary reports, caps and flags") {
    auto cols = std::vector<std::vector<double>>{iid_normal(30000, 1),
                                                 iid_normal(30000, 2),
                                                 iid_normal(30000, 9)};
    const Trace t = trace_from_columns(cols);
    const EssReport r = ess_summary(t, 0.5);
    CHECK(r.n_used == 15000);
    CHECK(r.min_ess <= r.median_ess);
    CHECK(r.min_ess > 0.9 * 15000);
    CHECK(r.stuck.empty());
    for (double e : r.per_coordinate_ess) CHECK(e <= 1.05 * 15000);

    // one stuck coordinate is flagged, not fatal
    cols.push_back(std::vector<double>(30000, 1.23));
    const EssReport rs = ess_summary(trace_from_columns(cols), 0.5);
    CHECK(rs.any_stuck());
    CHECK(rs.stuck == std::vector<int>{3});
    CHECK(std::isfinite(rs.min_ess));
}

TEST_CASE("split rhat separates mixed from unmixed") {
    // four chains from the same law
    std::vector<const Trace*> same;
    std::vector<Trace> storage;
    storage.reserve(4);
    for (std::uint64_t s = 1; s <= 4; ++s)
        storage.push_back(trace_from_columns({iid_normal(2000, s)}));
    for (const auto& t : storage) same.push_back(&t);
    CHECK(split_rhat(same, 0) < 1.01);
    CHECK(split_rhat(same, 0) >= 0.99);

    // two chains five sigma apart
    auto far = iid_normal(2000, 8);
    for (auto& v : far) v += 5.0;
    const Trace a = trace_from_columns({iid_normal(2000, 7)});
    const Trace b = trace_from_columns({far});
    CHECK(split_rhat({&a, &b}, 0) > 2.0);

    // duplicated chains have no between-chain variance
    const Trace dup = trace_from_columns({iid_normal(2000, 5)});
    const double r_dup = split_rhat({&dup, &dup}, 0);
    CHECK(r_dup >= 0.99);
    CHECK(r_dup <= 1.01);

    // affine invariance
    auto base = iid_normal(2000, 13);
    auto scaled = base;
    for (auto& v : scaled) v = 3.5 * v - 100.0;
    auto base2 = iid_normal(2000, 14);
    auto scaled2 = base2;
    for (auto& v : scaled2) v = 3.5 * v - 100.0;
    const Trace o1 = trace_from_columns({base});
    const Trace o2 = trace_from_columns({base2});
    const Trace s1 = trace_from_columns({scaled});
    const Trace s2 = trace_from_columns({scaled2});
    CHECK(split_rhat({&o1, &o2}, 0) ==
          doctest::Approx(split_rhat({&s1, &s2}, 0)).epsilon(1e-12));

    // failure modes
    const Trace constant = trace_from_columns({std::vector<double>(2000, 1.0)});
    CHECK_THROWS_AS(split_rhat({&constant, &constant}, 0), std::runtime_error);
    CHECK_THROWS_AS(split_rhat({&a}, 0), std::invalid_argument);
}

TEST_CASE("single chain split rhat flags stuck coordinates") {
    const Trace good = trace_from_columns({iid_normal(4000, 21),
                                           iid_normal(4000, 22)});
    const RhatSummary ok = single_chain_split_rhat(good, 0.5);
    CHECK(ok.stuck.empty());
    CHECK(ok.max_rhat < 1.05);

    const Trace half_stuck = trace_from_columns(
        {iid_normal(4000, 23), std::vector<double>(4000, 0.0)});
    const RhatSummary flagged = single_chain_split_rhat(half_stuck, 0.5);
    CHECK(flagged.any_stuck());
    CHECK(flagged.stuck == std::vector<int>{1});
}

TEST_CASE("acceptance rate bookkeeping") {
    Trace t = trace_from_columns({iid_normal(1000, 2)});
    CHECK(t.acceptance_rate() == 1.0);
    for (auto& a : t.accepted) a = 0;
    CHECK(t.acceptance_rate() == 0.0);
    for (std::size_t i = 0; i < t.accepted.size(); i += 4) t.accepted[i] = 1;
    CHECK(t.acceptance_rate() == doctest::Approx(0.25));
}

TEST_CASE("summary csv has the fixed schema") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "barker_diag_test";
    fs::create_directories(dir);
    const auto path = (dir / "summary.csv").string();
    write_summary_csv(path, {{"raw", "barker", "dense", 38.8, 156.7, 0.57, 1.02, "ok"},
                             {"raw", "mala", "dense", std::nan(""), std::nan(""),
                              0.002, 3.4, "n/a"}});
    std::ifstream in(path);
    std::string header, row1, row2;
    std::getline(in, header);
    std::getline(in, row1);
    std::getline(in, row2);
    CHECK(header ==
          "dataset_variant,sampler,precond_mode,min_ess,median_ess,accept_rate,"
          "rhat_max,status");
    CHECK(row1.find("raw,barker,dense,") == 0);
    CHECK(row1.find(",ok") != std::string::npos);
    CHECK(row2.find("nan") != std::string::npos);
    CHECK(row2.find(",n/a") != std::string::npos);
    fs::remove_all(dir);
}
