// Experiment front end for the barker sampling library.  Subcommands:
//   run       one chain on a configurable target
//   grid      the eight-cell {raw,standardized} x {dense,diag} x {mala,barker}
//             logistic-regression comparison
//   skewstudy acceptance of mala vs barker across skewness levels
//   jumpbias  unadjusted jump-process bias against step size
//   selftest  quick self-contained oracle checks
//
// Every command writes a flat key=value config snapshot beside its outputs;
// identical config + seed reproduces every output byte for byte.

#include <barker/barker.h>

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct CliError {
    int code;
    std::string message;
};

[[noreturn]] void die(int code, const std::string& message) {
    throw CliError{code, message};
}

void check(bk_status status, int exit_code = kExitRuntime) {
    if (status != BK_OK) die(exit_code, bk_last_error());
}

using TargetHandle = std::unique_ptr<bk_target, decltype(&bk_target_free)>;
using DatasetHandle = std::unique_ptr<bk_dataset, decltype(&bk_dataset_free)>;
using TraceHandle = std::unique_ptr<bk_trace, decltype(&bk_trace_free)>;

std::string format_full(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> values;
    std::string cur;
    for (char c : text + ",") {
        if (c == ',') {
            if (!cur.empty()) values.push_back(std::stod(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    return values;
}

void write_config_snapshot(const fs::path& dir,
                           const std::map<std::string, std::string>& kv) {
    std::string text;
    for (const auto& [key, value] : kv) text += key + "=" + value + "\n";
    FILE* f = std::fopen((dir / "config.txt").string().c_str(), "wb");
    if (!f) die(kExitRuntime, "cannot write config snapshot");
    std::fwrite(text.data(), 1, text.size(), f);
    std::fclose(f);
}

// ---------------------------------------------------------------- targets

struct TargetFlags {
    std::string target = "gaussian";
    int dim = 10;
    std::string scales;
    double eta = 1.0;
    // logistic source
    std::string dataset_path;
    std::string synthetic;  // n=...,imb=...,reg=...,rare=...,beta=...,seed=...
    std::string label_col = "label";
    std::string positive_class;
    bool no_header = false;
    std::string missing = "?,";
    bool standardize = false;
    bool no_intercept = false;
    double prior_var = 25.0;
    int select_imbalanced = 0;  // 0: keep all columns
    int select_regular = 0;
    int rarity_threshold = 2;

    void add_options(CLI::App* cmd) {
        cmd->add_option("--target", target, "gaussian | skew-normal | logistic")
            ->check(CLI::IsMember({"gaussian", "skew-normal", "logistic"}))
            ->capture_default_str();
        cmd->add_option("--dim", dim, "gaussian dimension")->capture_default_str();
        cmd->add_option("--scales", scales,
                        "comma-separated per-coordinate gaussian scales");
        cmd->add_option("--eta", eta, "skew-normal skewness")->capture_default_str();
        cmd->add_option("--dataset", dataset_path, "CSV file for the logistic target");
        cmd->add_option("--synthetic", synthetic,
                        "synthetic dataset spec n=..,imb=..,reg=..,rare=..,beta=..,seed=..");
        cmd->add_option("--label-col", label_col, "label column name or index")
            ->capture_default_str();
        cmd->add_option("--positive-class", positive_class,
                        "label value mapped to 1 (other values map to 0)");
        cmd->add_flag("--no-header", no_header, "CSV has no header row");
        cmd->add_option("--missing", missing, "comma-separated missing markers")
            ->capture_default_str();
        cmd->add_flag("--standardize", standardize,
                      "standardize covariates to zero mean, unit variance");
        cmd->add_flag("--no-intercept", no_intercept, "drop the intercept column");
        cmd->add_option("--prior-var", prior_var, "gaussian prior variance")
            ->capture_default_str();
        cmd->add_option("--select-imbalanced", select_imbalanced,
                        "select this many imbalanced covariates (0 keeps all)");
        cmd->add_option("--select-regular", select_regular,
                        "select this many regular covariates");
        cmd->add_option("--rarity-threshold", rarity_threshold,
                        "max rarest-category count for an imbalanced covariate")
            ->capture_default_str();
    }

    // keys use the option spellings, so a snapshot is itself a valid
    // --config file reproducing the run
    void describe(std::map<std::string, std::string>& kv) const {
        kv["target"] = target;
        if (target == "gaussian") {
            kv["dim"] = std::to_string(dim);
            if (!scales.empty()) kv["scales"] = scales;
        } else if (target == "skew-normal") {
            kv["eta"] = format_full(eta);
        } else {
            if (!dataset_path.empty()) kv["dataset"] = dataset_path;
            if (!synthetic.empty()) kv["synthetic"] = synthetic;
            kv["label-col"] = label_col;
            if (!positive_class.empty()) kv["positive-class"] = positive_class;
            kv["missing"] = missing;
            kv["no-header"] = no_header ? "1" : "0";
            kv["standardize"] = standardize ? "1" : "0";
            kv["no-intercept"] = no_intercept ? "1" : "0";
            kv["prior-var"] = format_full(prior_var);
            if (select_imbalanced > 0) {
                kv["select-imbalanced"] = std::to_string(select_imbalanced);
                kv["select-regular"] = std::to_string(select_regular);
                kv["rarity-threshold"] = std::to_string(rarity_threshold);
            }
        }
    }
};

std::map<std::string, double> parse_synthetic_spec(const std::string& text) {
    std::map<std::string, double> kv{{"n", 452},   {"imb", 25}, {"reg", 25},
                                     {"rare", 2},  {"beta", 1.0}, {"seed", 1}};
    std::string cur;
    for (char c : text + ",") {
        if (c == ',') {
            if (!cur.empty()) {
                const auto eq = cur.find('=');
                if (eq == std::string::npos)
                    die(kExitConfig, "bad synthetic spec token: " + cur);
                const std::string key = cur.substr(0, eq);
                if (!kv.count(key))
                    die(kExitConfig, "unknown synthetic spec key: " + key);
                kv[key] = std::stod(cur.substr(eq + 1));
            }
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    return kv;
}

DatasetHandle load_dataset(const TargetFlags& flags) {
    bk_dataset* raw = nullptr;
    if (!flags.dataset_path.empty()) {
        std::vector<std::string> markers;
        std::string cur;
        for (char c : flags.missing + ",") {
            if (c == ',') {
                markers.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        std::vector<const char*> marker_ptrs;
        for (const auto& m : markers) marker_ptrs.push_back(m.c_str());
        long long dropped = 0;
        const bk_status st = bk_dataset_load_csv(
            flags.dataset_path.c_str(), flags.label_col.c_str(),
            flags.positive_class.empty() ? nullptr : flags.positive_class.c_str(),
            flags.no_header ? 0 : 1, marker_ptrs.data(),
            static_cast<int>(marker_ptrs.size()), &raw, &dropped);
        if (st != BK_OK) die(kExitConfig, bk_last_error());
        std::fprintf(stderr, "loaded %lld rows (%lld dropped for missing values)\n",
                     bk_dataset_rows(raw), dropped);
    } else {
        const auto spec = parse_synthetic_spec(flags.synthetic);
        check(bk_dataset_synthesize(
                  static_cast<long long>(spec.at("n")),
                  static_cast<int>(spec.at("imb")), static_cast<int>(spec.at("reg")),
                  static_cast<int>(spec.at("rare")), spec.at("beta"),
                  static_cast<uint64_t>(spec.at("seed")), &raw),
              kExitConfig);
    }
    DatasetHandle ds(raw, &bk_dataset_free);
    if (flags.select_imbalanced > 0) {
        bk_dataset* selected = nullptr;
        check(bk_dataset_select_covariates(ds.get(), flags.select_imbalanced,
                                           flags.select_regular,
                                           flags.rarity_threshold, &selected),
              kExitConfig);
        ds.reset(selected);
    }
    return ds;
}

TargetHandle build_target(const TargetFlags& flags, DatasetHandle* dataset_out) {
    bk_target* t = nullptr;
    if (flags.target == "gaussian") {
        if (!flags.scales.empty()) {
            const auto scales = parse_list(flags.scales);
            check(bk_target_gaussian(static_cast<int>(scales.size()),
                                     scales.data(), &t),
                  kExitConfig);
        } else {
            check(bk_target_gaussian(flags.dim, nullptr, &t), kExitConfig);
        }
    } else if (flags.target == "skew-normal") {
        check(bk_target_skew_normal(flags.eta, &t), kExitConfig);
    } else {
        if (flags.dataset_path.empty() && flags.synthetic.empty())
            die(kExitConfig, "logistic target needs --dataset or --synthetic");
        DatasetHandle ds = load_dataset(flags);
        if (flags.standardize) {
            bk_dataset* std_ds = nullptr;
            check(bk_dataset_standardize(ds.get(), &std_ds), kExitConfig);
            ds.reset(std_ds);
        }
        check(bk_target_from_dataset(ds.get(), flags.prior_var,
                                     flags.no_intercept ? 0 : 1, &t),
              kExitConfig);
        if (dataset_out) *dataset_out = std::move(ds);
    }
    return TargetHandle(t, &bk_target_free);
}

// ---------------------------------------------------------------- chains

struct ChainFlags {
    std::string sampler = "barker";
    long long iters = 10000;
    uint64_t seed = 1;
    std::string precond = "diag";
    bool no_adapt = false;
    double target_accept = -1.0;
    double exponent = 0.6;
    double initial_scale = -1.0;
    bool binary_accept = false;
    double burn_in_frac = 0.5;

    void add_options(CLI::App* cmd) {
        cmd->add_option("--sampler", sampler, "rwm | mala | barker | barker-global")
            ->check(CLI::IsMember({"rwm", "mala", "barker", "barker-global"}))
            ->capture_default_str();
        cmd->add_option("--iters", iters, "chain length")->capture_default_str();
        cmd->add_option("--seed", seed, "random seed")->capture_default_str();
        cmd->add_option("--precond", precond, "dense | diag")
            ->check(CLI::IsMember({"dense", "diag"}))
            ->capture_default_str();
        cmd->add_flag("--no-adapt", no_adapt, "fixed preconditioner, no tuning");
        cmd->add_option("--target-accept", target_accept,
                        "adaptation target acceptance (negative: per-sampler default)");
        cmd->add_option("--exponent", exponent, "learning-rate exponent")
            ->capture_default_str();
        cmd->add_option("--initial-scale", initial_scale,
                        "initial global scale (negative: 2.38/sqrt(d))");
        cmd->add_flag("--binary-accept", binary_accept,
                      "adapt on the 0/1 indicator instead of the realized alpha");
        cmd->add_option("--burn-in-frac", burn_in_frac,
                        "fraction discarded before diagnostics")
            ->capture_default_str();
    }

    bk_sampler sampler_enum() const {
        if (sampler == "rwm") return BK_SAMPLER_RWM;
        if (sampler == "mala") return BK_SAMPLER_MALA;
        if (sampler == "barker-global") return BK_SAMPLER_BARKER_GLOBAL;
        return BK_SAMPLER_BARKER;
    }

    bk_chain_config config() const {
        bk_chain_config cfg;
        bk_chain_config_init(&cfg);
        cfg.sampler = sampler_enum();
        cfg.iterations = iters;
        cfg.seed = seed;
        cfg.adapt = no_adapt ? 0 : 1;
        cfg.precond_dense = precond == "dense" ? 1 : 0;
        cfg.target_accept = target_accept;
        cfg.learning_exponent = exponent;
        cfg.initial_scale = initial_scale;
        cfg.binary_accept_stat = binary_accept ? 1 : 0;
        return cfg;
    }

    void describe(std::map<std::string, std::string>& kv) const {
        kv["sampler"] = sampler;
        kv["iters"] = std::to_string(iters);
        kv["seed"] = std::to_string(seed);
        kv["precond"] = precond;
        kv["no-adapt"] = no_adapt ? "1" : "0";
        kv["target-accept"] = format_full(target_accept);
        kv["exponent"] = format_full(exponent);
        kv["initial-scale"] = format_full(initial_scale);
        kv["binary-accept"] = binary_accept ? "1" : "0";
        kv["burn-in-frac"] = format_full(burn_in_frac);
    }
};

struct CellResult {
    double min_ess = std::nan("");
    double median_ess = std::nan("");
    double accept = 0.0;
    double rhat = std::nan("");
    bool failed = false;
};

CellResult diagnose(const bk_trace* trace, double burn_in_frac) {
    CellResult r;
    long long used = 0;
    int stuck_ess = 0, stuck_rhat = 0;
    check(bk_trace_ess_summary(trace, burn_in_frac, &r.min_ess, &r.median_ess,
                               &used, &stuck_ess));
    check(bk_trace_split_rhat_max(trace, burn_in_frac, &r.rhat, &stuck_rhat));
    r.accept = bk_trace_acceptance_rate(trace);
    r.failed = stuck_ess > 0 || stuck_rhat > 0 || !(r.rhat <= 1.1);
    return r;
}

// ---------------------------------------------------------------- commands

int cmd_run(const TargetFlags& target_flags, const ChainFlags& chain_flags,
            const std::string& out_dir) {
    fs::create_directories(out_dir);
    TargetHandle target = build_target(target_flags, nullptr);

    const bk_chain_config cfg = chain_flags.config();
    bk_trace* trace_raw = nullptr;
    check(bk_run_chain(target.get(), &cfg, nullptr, &trace_raw));
    TraceHandle trace(trace_raw, &bk_trace_free);

    const fs::path dir(out_dir);
    check(bk_trace_write_csv(trace.get(), (dir / "trace.csv").string().c_str()));
    if (cfg.adapt)
        check(bk_trace_write_adaptation_csv(
            trace.get(), (dir / "adaptation.csv").string().c_str()));

    const CellResult r = diagnose(trace.get(), chain_flags.burn_in_frac);
    std::string variant = target_flags.target;
    if (target_flags.target == "logistic")
        variant += target_flags.standardize ? "-standardized" : "-raw";
    const bk_summary_row row{variant.c_str(),
                             chain_flags.sampler.c_str(),
                             chain_flags.precond.c_str(),
                             r.min_ess,
                             r.median_ess,
                             r.accept,
                             r.rhat,
                             r.failed ? "n/a" : "ok"};
    check(bk_write_summary_csv((dir / "summary.csv").string().c_str(), &row, 1));

    std::map<std::string, std::string> kv{{"command", "run"}};
    target_flags.describe(kv);
    chain_flags.describe(kv);
    write_config_snapshot(dir, kv);
    std::printf("run: %lld iterations, acceptance %.3f, min ESS %.1f, status %s\n",
                bk_trace_iterations(trace.get()), r.accept, r.min_ess,
                r.failed ? "n/a" : "ok");
    return kExitOk;
}

int cmd_grid(const TargetFlags& target_flags_in, long long iters, uint64_t seed,
             double burn_in_frac, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    TargetFlags target_flags = target_flags_in;
    target_flags.target = "logistic";
    if (target_flags.dataset_path.empty() && target_flags.synthetic.empty())
        target_flags.synthetic = "n=452,imb=25,reg=25,rare=2,beta=1,seed=1";

    DatasetHandle raw = load_dataset(target_flags);
    bk_dataset* std_raw = nullptr;
    check(bk_dataset_standardize(raw.get(), &std_raw));
    DatasetHandle standardized(std_raw, &bk_dataset_free);
    check(bk_dataset_write_csv(raw.get(), (dir / "dataset_raw.csv").string().c_str(),
                               nullptr));
    check(bk_dataset_write_csv(standardized.get(),
                               (dir / "dataset_standardized.csv").string().c_str(),
                               (dir / "dataset_standardized.json").string().c_str()));

    const char* variants[2] = {"raw", "standardized"};
    const char* preconds[2] = {"dense", "diag"};
    const char* samplers[2] = {"mala", "barker"};

    std::vector<bk_summary_row> rows;
    std::vector<std::string> labels(8 * 3);
    int cell = 0;
    std::vector<CellResult> results;
    for (int v = 0; v < 2; ++v) {
        const bk_dataset* ds = v == 0 ? raw.get() : standardized.get();
        bk_target* t = nullptr;
        check(bk_target_from_dataset(ds, target_flags.prior_var,
                                     target_flags.no_intercept ? 0 : 1, &t));
        TargetHandle target(t, &bk_target_free);
        for (int p = 0; p < 2; ++p) {
            for (int s = 0; s < 2; ++s, ++cell) {
                bk_chain_config cfg;
                bk_chain_config_init(&cfg);
                cfg.sampler = s == 0 ? BK_SAMPLER_MALA : BK_SAMPLER_BARKER;
                cfg.iterations = iters;
                cfg.precond_dense = p == 0 ? 1 : 0;

                const std::string cell_name = std::string(variants[v]) + "_" +
                                              preconds[p] + "_" + samplers[s];
                const fs::path cell_dir = dir / "cells" / cell_name;
                fs::create_directories(cell_dir);

                // two independent chains per cell; equilibrium is judged by
                // the cross-chain split R-hat
                TraceHandle first(nullptr, &bk_trace_free);
                TraceHandle second(nullptr, &bk_trace_free);
                for (int chain = 0; chain < 2; ++chain) {
                    cfg.seed = bk_derive_seed(
                        seed, static_cast<uint64_t>(cell * 2 + chain));
                    bk_trace* trace_raw = nullptr;
                    check(bk_run_chain(target.get(), &cfg, nullptr, &trace_raw));
                    TraceHandle trace(trace_raw, &bk_trace_free);
                    const std::string suffix = chain == 0 ? "" : "2";
                    check(bk_trace_write_csv(
                        trace.get(),
                        (cell_dir / ("trace" + suffix + ".csv")).string().c_str()));
                    check(bk_trace_write_adaptation_csv(
                        trace.get(),
                        (cell_dir / ("adaptation" + suffix + ".csv")).string().c_str()));
                    (chain == 0 ? first : second) = std::move(trace);
                }

                const bk_trace* pair[2] = {first.get(), second.get()};
                CellResult r;
                long long used = 0;
                int stuck_ess = 0, stuck_rhat = 0;
                check(bk_multi_ess_summary(pair, 2, burn_in_frac, &r.min_ess,
                                           &r.median_ess, &used, &stuck_ess));
                check(bk_multi_split_rhat_max(pair, 2, burn_in_frac, &r.rhat,
                                              &stuck_rhat));
                r.accept = 0.5 * (bk_trace_acceptance_rate(first.get()) +
                                  bk_trace_acceptance_rate(second.get()));
                r.failed = stuck_ess > 0 || stuck_rhat > 0 || !(r.rhat <= 1.1);
                results.push_back(r);
                labels[cell * 3 + 0] = variants[v];
                labels[cell * 3 + 1] = samplers[s];
                labels[cell * 3 + 2] = preconds[p];
                std::printf("cell %-26s accept %.3f rhat %-8.4g min-ess %-8.4g %s\n",
                            cell_name.c_str(), r.accept, r.rhat, r.min_ess,
                            r.failed ? "n/a" : "ok");
            }
        }
    }
    for (int c = 0; c < 8; ++c) {
        const CellResult& r = results[static_cast<std::size_t>(c)];
        rows.push_back({labels[c * 3 + 0].c_str(), labels[c * 3 + 1].c_str(),
                        labels[c * 3 + 2].c_str(), r.min_ess, r.median_ess,
                        r.accept, r.rhat, r.failed ? "n/a" : "ok"});
    }
    check(bk_write_summary_csv((dir / "summary.csv").string().c_str(), rows.data(),
                               static_cast<int>(rows.size())));

    std::map<std::string, std::string> kv{{"command", "grid"},
                                          {"iters", std::to_string(iters)},
                                          {"seed", std::to_string(seed)},
                                          {"burn-in-frac", format_full(burn_in_frac)}};
    target_flags.describe(kv);
    write_config_snapshot(dir, kv);
    return kExitOk;
}

int cmd_skewstudy(std::vector<double> etas, double x, double y, double step,
                  const std::string& out_dir) {
    fs::create_directories(out_dir);
    std::sort(etas.begin(), etas.end());
    std::string csv = "eta,alpha_mala,alpha_barker\n";
    for (double eta : etas) {
        bk_target* t = nullptr;
        check(bk_target_skew_normal(eta, &t), kExitConfig);
        TargetHandle target(t, &bk_target_free);
        double a_mala = 0.0, a_barker = 0.0;
        check(bk_mh_alpha(target.get(), BK_SAMPLER_MALA, &x, &y, 1, step, &a_mala));
        check(bk_mh_alpha(target.get(), BK_SAMPLER_BARKER, &x, &y, 1, step,
                          &a_barker));
        csv += format_full(eta) + "," + format_full(a_mala) + "," +
               format_full(a_barker) + "\n";
        std::printf("eta %-10g alpha_mala %-12.5g alpha_barker %.5g\n", eta,
                    a_mala, a_barker);
    }
    const fs::path dir(out_dir);
    FILE* f = std::fopen((dir / "skewstudy.csv").string().c_str(), "wb");
    if (!f) die(kExitRuntime, "cannot write skewstudy.csv");
    std::fwrite(csv.data(), 1, csv.size(), f);
    std::fclose(f);

    std::map<std::string, std::string> kv{{"command", "skewstudy"},
                                          {"x", format_full(x)},
                                          {"y", format_full(y)},
                                          {"step", format_full(step)}};
    std::string eta_text;
    for (double eta : etas) eta_text += (eta_text.empty() ? "" : ",") + format_full(eta);
    kv["etas"] = eta_text;
    write_config_snapshot(dir, kv);
    return kExitOk;
}

int cmd_jumpbias(std::vector<double> stds, double duration, double x0,
                 uint64_t seed, double bimodal_offset, bool dump_paths,
                 const std::string& out_dir) {
    fs::create_directories(out_dir);
    bk_target* t = nullptr;
    check(bk_target_gaussian(1, nullptr, &t), kExitConfig);
    TargetHandle target(t, &bk_target_free);

    std::sort(stds.begin(), stds.end(), std::greater<double>());
    std::string csv = "proposal_std,empirical_second_moment,abs_bias\n";
    int index = 0;
    for (double std_dev : stds) {
        double m2 = 0.0;
        long long events = 0;
        check(bk_jump_second_moment(target.get(), std_dev, bimodal_offset,
                                    duration, x0,
                                    bk_derive_seed(seed, static_cast<uint64_t>(index++)),
                                    &m2, &events));
        csv += format_full(std_dev) + "," + format_full(m2) + "," +
               format_full(std::abs(m2 - 1.0)) + "\n";
        std::printf("std %-6g second moment %-12.8g abs bias %-12.6g events %lld\n",
                    std_dev, m2, std::abs(m2 - 1.0), events);
        if (dump_paths) {
            bk_jump_path* path = nullptr;
            check(bk_jump_simulate(target.get(), std_dev, bimodal_offset,
                                   std::min(duration, 1e4), x0,
                                   bk_derive_seed(seed, 1000 + index), &path));
            const fs::path file = fs::path(out_dir) /
                                  ("path_" + std::to_string(index - 1) + ".csv");
            const bk_status st = bk_jump_path_write_csv(path, file.string().c_str());
            bk_jump_path_free(path);
            check(st);
        }
    }
    const fs::path dir(out_dir);
    FILE* f = std::fopen((dir / "jumpbias.csv").string().c_str(), "wb");
    if (!f) die(kExitRuntime, "cannot write jumpbias.csv");
    std::fwrite(csv.data(), 1, csv.size(), f);
    std::fclose(f);

    std::map<std::string, std::string> kv{{"command", "jumpbias"},
                                          {"duration", format_full(duration)},
                                          {"x0", format_full(x0)},
                                          {"seed", std::to_string(seed)},
                                          {"bimodal-offset", format_full(bimodal_offset)},
                                          {"dump-paths", dump_paths ? "1" : "0"}};
    std::string std_text;
    for (double s : stds) std_text += (std_text.empty() ? "" : ",") + format_full(s);
    kv["stds"] = std_text;
    write_config_snapshot(dir, kv);
    return kExitOk;
}

int cmd_selftest() {
    int failures = 0;
    const auto report = [&](const char* name, bool ok) {
        std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name);
        if (!ok) ++failures;
    };

    // balancing property over a log grid
    {
        double worst = 0.0;
        for (int i = 0; i <= 2000; ++i) {
            const double t = std::pow(10.0, -8.0 + 16.0 * i / 2000.0);
            for (auto kind : {BK_BALANCING_HASTINGS, BK_BALANCING_BARKER}) {
                double g = 0.0, g_inv = 0.0;
                check(bk_eval_balancing(kind, t, &g));
                check(bk_eval_balancing(kind, 1.0 / t, &g_inv));
                worst = std::max(worst, std::abs(g - t * g_inv));
            }
        }
        report("balancing identity g(t) = t g(1/t)", worst < 1e-12);
    }
    // constancy identity
    {
        std::vector<double> grid;
        for (int i = 0; i <= 500; ++i)
            grid.push_back(std::pow(10.0, -6.0 + 12.0 * i / 500.0));
        double dev_barker = 0.0, dev_hastings = 0.0;
        check(bk_constancy_deviation(BK_BALANCING_BARKER, grid.data(),
                                     static_cast<int>(grid.size()), &dev_barker));
        check(bk_constancy_deviation(BK_BALANCING_HASTINGS, grid.data(),
                                     static_cast<int>(grid.size()), &dev_hastings));
        report("constant rate identity holds for barker only",
               dev_barker < 1e-12 && dev_hastings >= 0.5);
    }
    // jump rate one half
    {
        bk_target* t = nullptr;
        check(bk_target_skew_normal(6.0, &t));
        double est = 0.0;
        check(bk_barker_jump_rate_mc(t, 0.9, 0.7, 400000, 12, &est));
        bk_target_free(t);
        report("monte carlo jump rate near one half", std::abs(est - 0.5) < 0.003);
    }
    // gradient checks across targets
    {
        bool ok = true;
        bk_target* g = nullptr;
        check(bk_target_gaussian(4, nullptr, &g));
        const double xg[4] = {0.3, -1.2, 2.0, 0.0};
        double err = 0.0;
        check(bk_fd_gradient_check(g, xg, 4, 1e-6, &err));
        ok = ok && err < 1e-5;
        bk_target_free(g);

        bk_target* sn = nullptr;
        check(bk_target_skew_normal(1e4, &sn));
        for (double z : {-2.0, -0.01, 0.5}) {
            check(bk_fd_gradient_check(sn, &z, 1, 1e-6, &err));
            ok = ok && err < 1e-5;
        }
        bk_target_free(sn);

        bk_dataset* ds = nullptr;
        check(bk_dataset_synthesize(100, 5, 5, 2, 1.0, 4, &ds));
        bk_target* post = nullptr;
        check(bk_target_from_dataset(ds, 25.0, 1, &post));
        std::vector<double> beta(11, 0.1);
        check(bk_fd_gradient_check(post, beta.data(), 11, 1e-6, &err));
        ok = ok && err < 1e-5;
        bk_target_free(post);
        bk_dataset_free(ds);
        report("finite-difference gradient checks", ok);
    }
    // logistic cdf symmetry
    {
        bool ok = true;
        for (double z : {0.0, 0.3, 5.0, 40.0, 700.0}) {
            double a = 0.0, b = 0.0;
            check(bk_logistic_cdf(z, &a));
            check(bk_logistic_cdf(-z, &b));
            ok = ok && std::abs(a + b - 1.0) < 1e-15;
        }
        report("logistic cdf symmetry", ok);
    }
    // skew-normal acceptance contrast
    {
        bk_target* sn = nullptr;
        check(bk_target_skew_normal(1000.0, &sn));
        const double x = 1.5, y = 0.0;
        double a_mala = 1.0, a_barker = 0.0;
        check(bk_mh_alpha(sn, BK_SAMPLER_MALA, &x, &y, 1, 1.0, &a_mala));
        check(bk_mh_alpha(sn, BK_SAMPLER_BARKER, &x, &y, 1, 1.0, &a_barker));
        bk_target_free(sn);
        report("acceptance collapse contrast at high skew",
               a_mala < 1e-10 && a_barker > 0.01);
    }
    std::printf(failures == 0 ? "selftest: all checks passed\n"
                              : "selftest: %d check(s) failed\n",
                failures);
    return failures == 0 ? kExitOk : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gradient-based MCMC with the Barker proposal"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run one chain and emit trace + summary");
    TargetFlags run_target;
    ChainFlags run_chain;
    std::string run_out = "out/run";
    run_target.add_options(run);
    run_chain.add_options(run);
    run->add_option("--out", run_out, "output directory")->capture_default_str();
    std::string run_config;
    run->add_option("--config", run_config,
                    "flat key=value config file; flags override");

    // grid
    auto* grid = app.add_subcommand(
        "grid", "eight-cell raw/standardized x dense/diag x mala/barker study");
    TargetFlags grid_target;
    long long grid_iters = 30000;
    uint64_t grid_seed = 1;
    double grid_burn = 0.5;
    std::string grid_out = "out/grid";
    grid_target.add_options(grid);
    grid->add_option("--iters", grid_iters, "iterations per cell")
        ->capture_default_str();
    grid->add_option("--seed", grid_seed, "base seed (cells derive their own)")
        ->capture_default_str();
    grid->add_option("--burn-in-frac", grid_burn, "burn-in fraction")
        ->capture_default_str();
    grid->add_option("--out", grid_out, "output directory")->capture_default_str();
    std::string grid_config;
    grid->add_option("--config", grid_config,
                     "flat key=value config file; flags override");

    // skewstudy
    auto* skew = app.add_subcommand(
        "skewstudy", "acceptance of mala vs barker across skewness levels");
    std::string skew_etas = "1,10,100,1000";
    double skew_x = 1.5, skew_y = 0.0, skew_step = 1.0;
    std::string skew_out = "out/skewstudy";
    skew->add_option("--etas", skew_etas, "comma-separated skewness values")
        ->capture_default_str();
    skew->add_option("--x", skew_x, "current point (above the mode)")
        ->capture_default_str();
    skew->add_option("--y", skew_y, "proposed point")->capture_default_str();
    skew->add_option("--step", skew_step, "proposal step size")
        ->capture_default_str();
    skew->add_option("--out", skew_out, "output directory")->capture_default_str();

    // jumpbias
    auto* jump = app.add_subcommand(
        "jumpbias", "unadjusted jump-process bias against proposal step");
    std::string jump_stds = "0.4,0.2,0.1";
    double jump_duration = 6.4e7, jump_x0 = 0.0, jump_bimodal = 0.0;
    uint64_t jump_seed = 1;
    std::string jump_out = "out/jumpbias";
    jump->add_option("--stds", jump_stds, "comma-separated proposal stddevs")
        ->capture_default_str();
    jump->add_option("--duration", jump_duration, "process horizon")
        ->capture_default_str();
    jump->add_option("--x0", jump_x0, "initial state")->capture_default_str();
    jump->add_option("--seed", jump_seed, "random seed")->capture_default_str();
    jump->add_option("--bimodal-offset", jump_bimodal,
                     "mode offset of the bimodal increment density (0: gaussian)")
        ->capture_default_str();
    bool jump_dump_paths = false;
    jump->add_flag("--dump-paths", jump_dump_paths,
                   "also write short event-time/state path CSVs");
    jump->add_option("--out", jump_out, "output directory")->capture_default_str();

    // selftest
    app.add_subcommand("selftest", "run the built-in oracle checks");

    // flat key=value config files: values are injected as trailing options
    // for any key the command line did not set, so explicit flags override
    std::vector<std::string> args(argv, argv + argc);
    try {
        for (std::size_t i = 1; i + 1 < args.size(); ++i) {
            if (args[i] != "--config") continue;
            std::ifstream cfg(args[i + 1]);
            if (!cfg) {
                std::fprintf(stderr, "error: cannot read config file %s\n",
                             args[i + 1].c_str());
                return kExitConfig;
            }
            std::vector<std::string> injected;
            std::string line;
            while (std::getline(cfg, line)) {
                if (line.empty() || line[0] == '#') continue;
                const auto eq = line.find('=');
                if (eq == std::string::npos) {
                    std::fprintf(stderr, "error: bad config line: %s\n", line.c_str());
                    return kExitConfig;
                }
                const std::string key = line.substr(0, eq);
                if (key == "config" || key == "command") continue;
                const std::string flag = "--" + key;
                bool already = false;
                for (const auto& a : args)
                    if (a == flag || a.rfind(flag + "=", 0) == 0) already = true;
                if (!already) injected.push_back(flag + "=" + line.substr(eq + 1));
            }
            args.insert(args.end(), injected.begin(), injected.end());
            break;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    }
    std::vector<char*> argv2;
    for (auto& a : args) argv2.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv2.size()), argv2.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (run->parsed()) return cmd_run(run_target, run_chain, run_out);
        if (grid->parsed())
            return cmd_grid(grid_target, grid_iters, grid_seed, grid_burn, grid_out);
        if (skew->parsed())
            return cmd_skewstudy(parse_list(skew_etas), skew_x, skew_y, skew_step,
                                 skew_out);
        if (jump->parsed())
            return cmd_jumpbias(parse_list(jump_stds), jump_duration, jump_x0,
                                jump_seed, jump_bimodal, jump_dump_paths,
                                jump_out);
        return cmd_selftest();
    } catch (const CliError& e) {
        std::fprintf(stderr, "error: %s\n", e.message.c_str());
        return e.code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
}
