#pragma once

#include "tsbag/bootstrap.hpp"
#include "tsbag/metrics.hpp"
#include "tsbag/pcmci.hpp"
#include "tsbag/scm.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tsbag {

enum class CalibrationMode { MeanCalibration, SingleSampleMAE };

/// Settings shared by every subcommand. Read from a flat `key = value` file
/// (see apply_setting for the keys); command-line flags override file values.
struct HarnessConfig {
    GeneratorConfig generator;
    DiscoveryConfig discovery;
    BootstrapConfig bootstrap;
    std::uint64_t seed = 0;
    int n_models = 10;
    std::size_t T = 200;
    std::vector<double> alpha_sweep;  // empty: discovery.alpha_pc only
    Algorithm algorithm = Algorithm::PCMCIPlus;
    int workers = 1;
    std::string out_dir;  // empty: write nothing
    bool oracle_ci = false;
    bool resume = false;
    int max_model_retries = 50;
    // confidence-eval
    int D = 30;
    CalibrationMode mode = CalibrationMode::SingleSampleMAE;

    void validate() const;
    std::vector<double> alphas() const;
};

/// Throws ConfigError on an unknown key or a malformed value.
void apply_setting(HarnessConfig& cfg, std::string_view key, std::string_view value);
/// Lines `key = value`; `#` starts a comment. Throws ConfigError with the line number.
void apply_config_text(HarnessConfig& cfg, std::string_view text);
void apply_config_file(HarnessConfig& cfg, const std::string& path);
/// Canonical dump of every setting, readable by apply_config_text.
std::string dump_config(const HarnessConfig& cfg);

std::string algorithm_name(Algorithm a);
Algorithm parse_algorithm(std::string_view s);
Aggregation parse_aggregation(std::string_view s);

/// Draws a model for slot `index` and simulates T rows, redrawing on
/// generation failures up to cfg.max_model_retries times.
struct ModelSample {
    StructuralCausalModel scm;
    TimeSeriesGraph truth;
    TimeSeriesDataset data;
    int attempt = 0;
};
ModelSample draw_benchmark_model(const HarnessConfig& cfg, int index);

// ---- benchmark ----

struct MethodResult {
    std::string method;  // e.g. "pcmci+" or "bagged-pcmci+"
    double alpha = 0.0;
    MetricsReport report;
};

struct ModelRecord {
    int index = 0;
    std::vector<MethodResult> results;
};

struct Summary {
    double mean = 0.0;
    double se = 0.0;
};

/// Mean and standard error (sample std / sqrt(n)); se = 0 for n < 2.
Summary summarize(const std::vector<double>& values);

struct AggregateRow {
    std::string method;
    double alpha = 0.0;
    LinkCategory category = LinkCategory::All;
    int n_models = 0;
    Summary adj_precision, adj_recall, adj_f1, fpr;
    int degenerate_models = 0;
    // Contemporaneous rows only.
    Summary orient_precision, orient_recall, orient_f1, conflict_fraction;
};

struct PrCurve {
    std::string method;
    std::string curve;  // "<category>_adj" or "contemp_orient"
    std::vector<double> alphas;
    std::vector<std::pair<double, double>> points;  // (mean recall, mean precision)
    std::optional<double> auc;
};

struct BenchmarkResult {
    std::vector<ModelRecord> models;
    std::vector<AggregateRow> rows;
    std::vector<PrCurve> curves;

    const AggregateRow& row(std::string_view method, double alpha, LinkCategory c) const;
    const PrCurve& curve(std::string_view method, std::string_view name) const;
    /// Per-model values of one metric, in model order.
    std::vector<double> per_model(std::string_view method, double alpha,
                                  double (*get)(const MetricsReport&)) const;
};

std::string base_method_name(Algorithm a);
std::string bagged_method_name(Algorithm a);

BenchmarkResult cmd_benchmark(const HarnessConfig& cfg);

std::string model_record_csv(const ModelRecord& rec);
ModelRecord parse_model_record(std::string_view text, int index);
std::string metrics_csv(const BenchmarkResult& r);
std::string pr_points_csv(const BenchmarkResult& r);

// ---- confidence evaluation ----

struct CalibrationRow {
    int model = 0;
    PairKey key;
    LinkType true_mark = LinkType::Absent;
    LinkType reference_mark = LinkType::Absent;
    double reference = 0.0;  // frequency of the modal base mark over D runs
    double predicted = 0.0;  // bagged confidence (mean over D in MeanCalibration)
    double predicted_std = 0.0;
};

struct MaeEntry {
    std::string category;  // "all", "contemp", "lagged"
    bool existing = false;
    double mae = 0.0;
    std::size_t n_pairs = 0;
};

struct CalibrationResult {
    std::vector<CalibrationRow> rows;
    std::vector<MaeEntry> mae;

    double mae_of(std::string_view category, bool existing) const;
    /// MAE over every pair.
    double overall_mae() const;
};

CalibrationResult cmd_confidence_eval(const HarnessConfig& cfg);
std::string calibration_csv(const CalibrationResult& r);
std::string calibration_summary_csv(const CalibrationResult& r);
std::string calibration_bins_csv(const CalibrationResult& r, int n_bins = 10);

// ---- discover / generate ----

struct DiscoverResult {
    BootstrapEnsemble ensemble;  // B = 0 runs give a one-graph ensemble
};

/// Runs the configured algorithm on `data`, bagged when cfg.bootstrap.B >= 1
/// and plain when B == 0.
DiscoverResult cmd_discover(const TimeSeriesDataset& data, const HarnessConfig& cfg, int B);

/// Writes data.csv, true_graph.txt and model.txt into cfg.out_dir.
ModelSample cmd_generate(const HarnessConfig& cfg);

std::string describe_model(const StructuralCausalModel& scm);

void write_text_file(const std::string& path, std::string_view text);
std::string read_text_file(const std::string& path);

}  // namespace tsbag
