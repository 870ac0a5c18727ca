// Command-line front end: benchmark, confidence-eval, discover, generate.
#include "tsbag/errors.hpp"
#include "tsbag/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

using namespace tsbag;

namespace {

struct Flags {
    std::string config;
    std::vector<std::string> settings;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<std::string> out;
    std::optional<std::string> alpha;
    std::optional<int> B;
    std::optional<std::string> algorithm;
    std::optional<std::string> aggregation;
    bool oracle_ci = false;
    bool resume = false;
    std::optional<std::string> mode;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "settings file (key = value lines)");
    cmd->add_option("--set", f.settings, "override one setting, key=value")->allow_extra_args(false);
    cmd->add_option("--seed", f.seed, "master seed");
    cmd->add_option("--workers", f.workers, "worker threads");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--alpha", f.alpha, "significance level or comma-separated sweep");
    cmd->add_option("--B", f.B, "bootstrap replicas");
    cmd->add_option("--algorithm", f.algorithm, "pcmci+ or pc");
    cmd->add_option("--aggregation", f.aggregation, "majority or two-stage");
    cmd->add_flag("--oracle-ci", f.oracle_ci, "use the d-separation oracle (testing only)");
}

HarnessConfig build_config(const Flags& f, HarnessConfig cfg) {
    if (!f.config.empty()) apply_config_file(cfg, f.config);
    for (const auto& s : f.settings) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
        apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    if (f.seed) cfg.seed = *f.seed;
    if (f.workers) cfg.workers = *f.workers;
    if (f.out) cfg.out_dir = *f.out;
    if (f.alpha) apply_setting(cfg, "alpha", *f.alpha);
    if (f.B) cfg.bootstrap.B = *f.B;
    if (f.algorithm) cfg.algorithm = parse_algorithm(*f.algorithm);
    if (f.aggregation) cfg.bootstrap.aggregation = parse_aggregation(*f.aggregation);
    if (f.oracle_ci) cfg.oracle_ci = true;
    if (f.resume) cfg.resume = true;
    if (f.mode) apply_setting(cfg, "mode", *f.mode);
    return cfg;
}

void report_written(const HarnessConfig& cfg, const char* what) {
    if (!cfg.out_dir.empty()) std::cout << "wrote " << what << " to " << cfg.out_dir << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"time-series causal discovery with bootstrap aggregation"};
    app.require_subcommand(1);
    Flags f;

    auto* bench = app.add_subcommand("benchmark", "score base and bagged discovery on synthetic models");
    add_common(bench, f);
    bench->add_flag("--resume", f.resume, "reuse per-model results already in --out");

    auto* conf = app.add_subcommand("confidence-eval", "compare bootstrap confidences with reference frequencies");
    add_common(conf, f);
    conf->add_option("--mode", f.mode, "single-sample or mean-calibration");

    std::string data_path;
    auto* disc = app.add_subcommand("discover", "run discovery on a CSV time series");
    add_common(disc, f);
    disc->add_option("data", data_path, "CSV file, rows are time steps")->required();

    auto* gen = app.add_subcommand("generate", "emit a synthetic dataset and its true graph");
    add_common(gen, f);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (bench->parsed()) {
            const auto cfg = build_config(f, HarnessConfig{});
            const auto result = cmd_benchmark(cfg);
            if (cfg.out_dir.empty()) std::cout << metrics_csv(result);
            report_written(cfg, "metrics.csv, pr_points.csv and per-model records");
        } else if (conf->parsed()) {
            const auto cfg = build_config(f, HarnessConfig{});
            const auto result = cmd_confidence_eval(cfg);
            std::cout << calibration_summary_csv(result);
            report_written(cfg, "calibration tables");
        } else if (disc->parsed()) {
            HarnessConfig base;
            base.bootstrap.B = 0;  // plain run unless replicas are requested
            const auto cfg = build_config(f, base);
            const auto data = read_csv(data_path);
            const auto result = cmd_discover(data, cfg, cfg.bootstrap.B);
            if (cfg.out_dir.empty()) {
                std::cout << serialize(result.ensemble.bagged) << confidence_csv(result.ensemble);
            }
            report_written(cfg, "graph.txt, frequencies.csv and confidence.csv");
        } else if (gen->parsed()) {
            const auto cfg = build_config(f, HarnessConfig{});
            const auto sample = cmd_generate(cfg);
            if (cfg.out_dir.empty()) std::cout << describe_model(sample.scm);
            report_written(cfg, "data.csv, true_graph.txt and model.txt");
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
