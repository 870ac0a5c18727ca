#include "tsbag/harness.hpp"

#include "tsbag/errors.hpp"
#include "tsbag/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

namespace fs = std::filesystem;

namespace tsbag {

void write_text_file(const std::string& path, std::string_view text) {
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw DataError("cannot write " + tmp.string());
        out << text;
        if (!out) throw DataError("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) return out;
        start = pos + 1;
    }
}

std::vector<std::string_view> lines_of(std::string_view text) {
    std::vector<std::string_view> out;
    for (auto line : split(text, '\n')) {
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) out.push_back(line);
    }
    return out;
}

double to_double(std::string_view s, std::size_t line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ParseError("line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
    }
    return v;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void log_line(const std::string& msg) {
    std::fprintf(stderr, "%s\n", msg.c_str());
}

DiscoveryConfig discovery_for(const HarnessConfig& cfg, const TimeSeriesGraph& truth) {
    DiscoveryConfig dc = cfg.discovery;
    if (cfg.oracle_ci) {
        dc.ci_test = {CITestKind::Oracle, std::make_shared<const TimeSeriesGraph>(truth)};
    }
    return dc;
}

std::string model_path(const HarnessConfig& cfg, int index) {
    char name[32];
    std::snprintf(name, sizeof name, "model_%04d.csv", index);
    return (fs::path(cfg.out_dir) / "models" / name).string();
}

}  // namespace

ModelSample draw_benchmark_model(const HarnessConfig& cfg, int index) {
    const auto idx = static_cast<std::uint64_t>(index);
    for (int attempt = 0;; ++attempt) {
        const auto at = static_cast<std::uint64_t>(attempt);
        try {
            ModelSample s;
            s.attempt = attempt;
            Rng model_rng = make_rng(cfg.seed, {0, idx, at});
            s.scm = sample_model(cfg.generator, model_rng);
            Rng data_rng = make_rng(cfg.seed, {1, idx, at});
            s.data = simulate(s.scm, cfg.T, data_rng);
            s.truth = true_graph(s.scm, cfg.discovery.tau_max);
            return s;
        } catch (const Error& e) {
            if (!dynamic_cast<const NumericalOverflow*>(&e) &&
                !dynamic_cast<const MaxRejections*>(&e)) {
                throw;
            }
            if (attempt >= cfg.max_model_retries) throw;
            log_line("model " + std::to_string(index) + ": redrawing after attempt " +
                     std::to_string(attempt) + " (" + e.what() + ")");
        }
    }
}

// ---- benchmark ----

Summary summarize(const std::vector<double>& values) {
    Summary s;
    if (values.empty()) return s;
    const double n = static_cast<double>(values.size());
    for (double v : values) s.mean += v;
    s.mean /= n;
    if (values.size() < 2) return s;
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.se = std::sqrt(ss / (n - 1)) / std::sqrt(n);
    return s;
}

std::string base_method_name(Algorithm a) { return algorithm_name(a); }
std::string bagged_method_name(Algorithm a) { return "bagged-" + algorithm_name(a); }

namespace {

ModelRecord run_benchmark_model(const HarnessConfig& cfg, int index) {
    const ModelSample s = draw_benchmark_model(cfg, index);
    DiscoveryConfig dc = discovery_for(cfg, s.truth);
    BootstrapConfig bc = cfg.bootstrap;
    bc.seed = derive_seed(cfg.seed, {2, static_cast<std::uint64_t>(index)});
    ModelRecord rec{index, {}};
    for (double alpha : cfg.alphas()) {
        dc.alpha_pc = alpha;
        auto t0 = std::chrono::steady_clock::now();
        const auto g = run_algorithm(cfg.algorithm, s.data, dc);
        rec.results.push_back(
            {base_method_name(cfg.algorithm), alpha, evaluate(g, s.truth, seconds_since(t0))});
        if (bc.B >= 1) {
            t0 = std::chrono::steady_clock::now();
            const auto ens = run_bagged(s.data, cfg.algorithm, dc, bc, 1);
            rec.results.push_back({bagged_method_name(cfg.algorithm), alpha,
                                   evaluate(ens.bagged, s.truth, seconds_since(t0))});
        }
    }
    return rec;
}

int degenerate_bits(const AdjacencyMetrics& m) {
    return (m.no_estimated ? 1 : 0) | (m.no_true ? 2 : 0) | (m.no_negatives ? 4 : 0);
}

std::vector<std::string> record_columns() {
    std::vector<std::string> cols{"method", "alpha"};
    for (auto& c : MetricsReport::column_names()) cols.push_back(c);
    for (LinkCategory c : kAllCategories) cols.push_back(std::string(category_name(c)) + "_degenerate");
    cols.push_back("contemp_orient_degenerate");
    return cols;
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ',';
        out += parts[i];
    }
    return out;
}

}  // namespace

std::string model_record_csv(const ModelRecord& rec) {
    std::ostringstream os;
    os << join(record_columns()) << '\n';
    for (const auto& r : rec.results) {
        os << r.method << ',' << format_double(r.alpha);
        for (double v : r.report.to_values()) os << ',' << format_double(v);
        for (const auto& a : r.report.adjacency) os << ',' << degenerate_bits(a);
        os << ','
           << ((r.report.orientation.no_estimated ? 1 : 0) | (r.report.orientation.no_true ? 2 : 0))
           << '\n';
    }
    return os.str();
}

ModelRecord parse_model_record(std::string_view text, int index) {
    const auto lines = lines_of(text);
    const auto cols = record_columns();
    if (lines.empty() || lines[0] != join(cols)) throw ParseError("model record: unexpected header");
    ModelRecord rec{index, {}};
    for (std::size_t l = 1; l < lines.size(); ++l) {
        const auto cells = split(lines[l], ',');
        if (cells.size() != cols.size()) {
            throw ParseError("model record line " + std::to_string(l + 1) + ": wrong column count");
        }
        MethodResult r;
        r.method = std::string(cells[0]);
        r.alpha = to_double(cells[1], l + 1);
        std::size_t c = 2;
        for (auto& a : r.report.adjacency) {
            a.precision = to_double(cells[c++], l + 1);
            a.recall = to_double(cells[c++], l + 1);
            a.f1 = to_double(cells[c++], l + 1);
            a.fpr = to_double(cells[c++], l + 1);
        }
        r.report.orientation.precision = to_double(cells[c++], l + 1);
        r.report.orientation.recall = to_double(cells[c++], l + 1);
        r.report.orientation.f1 = to_double(cells[c++], l + 1);
        r.report.conflict_fraction = to_double(cells[c++], l + 1);
        for (auto& a : r.report.adjacency) {
            const int bits = static_cast<int>(to_double(cells[c++], l + 1));
            a.no_estimated = bits & 1;
            a.no_true = bits & 2;
            a.no_negatives = bits & 4;
        }
        const int bits = static_cast<int>(to_double(cells[c++], l + 1));
        r.report.orientation.no_estimated = bits & 1;
        r.report.orientation.no_true = bits & 2;
        rec.results.push_back(std::move(r));
    }
    return rec;
}

namespace {

std::vector<std::string> methods_in(const std::vector<ModelRecord>& models) {
    std::vector<std::string> out;
    for (const auto& r : models.front().results) {
        if (std::find(out.begin(), out.end(), r.method) == out.end()) out.push_back(r.method);
    }
    return out;
}

const MethodResult* find_result(const ModelRecord& rec, std::string_view method, double alpha) {
    for (const auto& r : rec.results) {
        if (r.method == method && r.alpha == alpha) return &r;
    }
    return nullptr;
}

void aggregate(BenchmarkResult& out, const std::vector<double>& alphas) {
    for (const auto& method : methods_in(out.models)) {
        for (double alpha : alphas) {
            std::vector<const MetricsReport*> reports;
            for (const auto& m : out.models) {
                const auto* r = find_result(m, method, alpha);
                if (!r) throw DataError("model " + std::to_string(m.index) + " lacks " + method);
                reports.push_back(&r->report);
            }
            auto collect = [&](auto get) {
                std::vector<double> v;
                for (const auto* r : reports) v.push_back(get(*r));
                return summarize(v);
            };
            for (LinkCategory c : kAllCategories) {
                AggregateRow row;
                row.method = method;
                row.alpha = alpha;
                row.category = c;
                row.n_models = static_cast<int>(reports.size());
                row.adj_precision = collect([c](const MetricsReport& r) { return r.adj(c).precision; });
                row.adj_recall = collect([c](const MetricsReport& r) { return r.adj(c).recall; });
                row.adj_f1 = collect([c](const MetricsReport& r) { return r.adj(c).f1; });
                row.fpr = collect([c](const MetricsReport& r) { return r.adj(c).fpr; });
                for (const auto* r : reports) row.degenerate_models += degenerate_bits(r->adj(c)) != 0;
                if (c == LinkCategory::Contemporaneous) {
                    row.orient_precision = collect([](const MetricsReport& r) { return r.orientation.precision; });
                    row.orient_recall = collect([](const MetricsReport& r) { return r.orientation.recall; });
                    row.orient_f1 = collect([](const MetricsReport& r) { return r.orientation.f1; });
                    row.conflict_fraction = collect([](const MetricsReport& r) { return r.conflict_fraction; });
                }
                out.rows.push_back(row);
            }
        }
        auto add_curve = [&](std::string name, auto get_point) {
            PrCurve curve{method, std::move(name), alphas, {}, std::nullopt};
            for (double alpha : alphas) curve.points.push_back(get_point(alpha));
            try {
                curve.auc = pr_auc(curve.points);
            } catch (const InsufficientPoints&) {
            }
            out.curves.push_back(std::move(curve));
        };
        for (LinkCategory c : kAllCategories) {
            add_curve(std::string(category_name(c)) + "_adj", [&](double alpha) {
                const auto& row = out.row(method, alpha, c);
                return std::pair{row.adj_recall.mean, row.adj_precision.mean};
            });
        }
        add_curve("contemp_orient", [&](double alpha) {
            const auto& row = out.row(method, alpha, LinkCategory::Contemporaneous);
            return std::pair{row.orient_recall.mean, row.orient_precision.mean};
        });
    }
}

std::string runtime_csv(const std::vector<ModelRecord>& computed) {
    std::ostringstream os;
    os << "model,method,alpha,runtime_seconds\n";
    for (const auto& m : computed) {
        for (const auto& r : m.results) {
            os << m.index << ',' << r.method << ',' << format_double(r.alpha) << ','
               << r.report.runtime_seconds << '\n';
        }
    }
    return os.str();
}

}  // namespace

const AggregateRow& BenchmarkResult::row(std::string_view method, double alpha,
                                         LinkCategory c) const {
    for (const auto& r : rows) {
        if (r.method == method && r.alpha == alpha && r.category == c) return r;
    }
    throw OutOfRange("no aggregate row for " + std::string(method));
}

const PrCurve& BenchmarkResult::curve(std::string_view method, std::string_view name) const {
    for (const auto& c : curves) {
        if (c.method == method && c.curve == name) return c;
    }
    throw OutOfRange("no curve " + std::string(name) + " for " + std::string(method));
}

std::vector<double> BenchmarkResult::per_model(std::string_view method, double alpha,
                                               double (*get)(const MetricsReport&)) const {
    std::vector<double> out;
    for (const auto& m : models) {
        const auto* r = find_result(m, method, alpha);
        if (!r) throw OutOfRange("no result for " + std::string(method));
        out.push_back(get(r->report));
    }
    return out;
}

BenchmarkResult cmd_benchmark(const HarnessConfig& cfg) {
    cfg.validate();
    if (cfg.bootstrap.B >= 1) cfg.bootstrap.validate();
    const bool write = !cfg.out_dir.empty();
    if (write) {
        const auto config_path = (fs::path(cfg.out_dir) / "config.txt").string();
        const std::string dumped = dump_config(cfg);
        if (cfg.resume && fs::exists(config_path) && read_text_file(config_path) != dumped) {
            throw ConfigError("resume: settings differ from " + config_path);
        }
        write_text_file(config_path, dumped);
    }

    BenchmarkResult out;
    out.models.resize(static_cast<std::size_t>(cfg.n_models));
    std::vector<char> computed(out.models.size(), 0);
    parallel_for(out.models.size(), cfg.workers, [&](std::size_t m) {
        const int index = static_cast<int>(m);
        if (write && cfg.resume) {
            const auto path = model_path(cfg, index);
            if (fs::exists(path)) {
                out.models[m] = parse_model_record(read_text_file(path), index);
                return;
            }
        }
        out.models[m] = run_benchmark_model(cfg, index);
        computed[m] = 1;
        if (write) write_text_file(model_path(cfg, index), model_record_csv(out.models[m]));
    });
    aggregate(out, cfg.alphas());

    if (write) {
        const fs::path dir(cfg.out_dir);
        write_text_file((dir / "metrics.csv").string(), metrics_csv(out));
        write_text_file((dir / "pr_points.csv").string(), pr_points_csv(out));
        std::vector<ModelRecord> fresh;
        for (std::size_t m = 0; m < out.models.size(); ++m) {
            if (computed[m]) fresh.push_back(out.models[m]);
        }
        write_text_file((dir / "runtime.csv").string(), runtime_csv(fresh));
    }
    return out;
}

std::string metrics_csv(const BenchmarkResult& r) {
    std::ostringstream os;
    os << "method,alpha,category,n_models,adj_precision,adj_precision_se,adj_recall,"
          "adj_recall_se,adj_f1,adj_f1_se,fpr,fpr_se,degenerate_models,orient_precision,"
          "orient_precision_se,orient_recall,orient_recall_se,orient_f1,orient_f1_se,"
          "conflict_fraction,conflict_fraction_se\n";
    auto put = [&](const Summary& s) { os << ',' << format_double(s.mean) << ',' << format_double(s.se); };
    for (const auto& row : r.rows) {
        os << row.method << ',' << format_double(row.alpha) << ',' << category_name(row.category)
           << ',' << row.n_models;
        put(row.adj_precision);
        put(row.adj_recall);
        put(row.adj_f1);
        put(row.fpr);
        os << ',' << row.degenerate_models;
        if (row.category == LinkCategory::Contemporaneous) {
            put(row.orient_precision);
            put(row.orient_recall);
            put(row.orient_f1);
            put(row.conflict_fraction);
        } else {
            os << ",,,,,,,,";
        }
        os << '\n';
    }
    return os.str();
}

std::string pr_points_csv(const BenchmarkResult& r) {
    std::ostringstream os;
    os << "method,curve,alpha,recall,precision,pr_auc\n";
    for (const auto& c : r.curves) {
        for (std::size_t i = 0; i < c.points.size(); ++i) {
            os << c.method << ',' << c.curve << ',' << format_double(c.alphas[i]) << ','
               << format_double(c.points[i].first) << ',' << format_double(c.points[i].second)
               << ',' << (c.auc ? format_double(*c.auc) : "NA") << '\n';
        }
    }
    return os.str();
}

// ---- confidence evaluation ----

namespace {

struct CalibrationModel {
    std::vector<CalibrationRow> rows;
};

LinkType modal_mark(const std::array<int, kLinkTypeCount>& counts) {
    // Highest count; equal counts resolved in the aggregation preference order.
    constexpr std::array<LinkType, kLinkTypeCount> order{
        LinkType::Absent, LinkType::Conflict, LinkType::Unoriented, LinkType::DirectedTo,
        LinkType::DirectedFrom};
    LinkType best = order[0];
    for (LinkType m : order) {
        if (counts[index_of(m)] > counts[index_of(best)]) best = m;
    }
    return best;
}

CalibrationModel run_calibration_model(const HarnessConfig& cfg, int index) {
    const auto idx = static_cast<std::uint64_t>(index);
    StructuralCausalModel scm;
    std::vector<TimeSeriesDataset> datasets;
    for (int attempt = 0;; ++attempt) {
        const auto at = static_cast<std::uint64_t>(attempt);
        try {
            Rng model_rng = make_rng(cfg.seed, {10, idx, at});
            scm = sample_model(cfg.generator, model_rng);
            datasets.clear();
            for (int d = 0; d < cfg.D; ++d) {
                Rng data_rng = make_rng(cfg.seed, {11, idx, at, static_cast<std::uint64_t>(d)});
                datasets.push_back(simulate(scm, cfg.T, data_rng));
            }
            break;
        } catch (const NumericalOverflow& e) {
            if (attempt >= cfg.max_model_retries) throw;
            log_line("model " + std::to_string(index) + ": redrawing after attempt " +
                     std::to_string(attempt) + " (" + e.what() + ")");
        }
    }
    const TimeSeriesGraph truth = true_graph(scm, cfg.discovery.tau_max);
    const DiscoveryConfig dc = discovery_for(cfg, truth);

    FrequencyTable reference(truth.n_vars(), truth.tau_max(), cfg.D);
    for (const auto& data : datasets) reference.add(run_algorithm(cfg.algorithm, data, dc));

    const auto keys = truth.pair_keys();
    const int runs = cfg.mode == CalibrationMode::SingleSampleMAE ? 1 : cfg.D;
    std::vector<std::vector<double>> confidences(keys.size());
    for (int d = 0; d < runs; ++d) {
        BootstrapConfig bc = cfg.bootstrap;
        bc.seed = derive_seed(cfg.seed, {12, idx, static_cast<std::uint64_t>(d)});
        const auto ens = run_bagged(datasets[static_cast<std::size_t>(d)], cfg.algorithm, dc, bc, 1);
        for (std::size_t k = 0; k < keys.size(); ++k) confidences[k].push_back(ens.confidence[k]);
    }

    CalibrationModel out;
    for (std::size_t k = 0; k < keys.size(); ++k) {
        CalibrationRow row;
        row.model = index;
        row.key = keys[k];
        row.true_mark = truth.get(keys[k]);
        const auto counts = reference.counts(keys[k]);
        row.reference_mark = modal_mark(counts);
        row.reference = static_cast<double>(counts[index_of(row.reference_mark)]) / cfg.D;
        double sum = 0.0;
        for (double c : confidences[k]) sum += c;
        row.predicted = sum / static_cast<double>(confidences[k].size());
        double ss = 0.0;
        for (double c : confidences[k]) ss += (c - row.predicted) * (c - row.predicted);
        row.predicted_std = confidences[k].size() > 1
                                ? std::sqrt(ss / static_cast<double>(confidences[k].size() - 1))
                                : 0.0;
        out.rows.push_back(row);
    }
    return out;
}

bool in_calibration_category(const PairKey& k, std::string_view category) {
    if (category == "contemp") return k.lag == 0;
    if (category == "lagged") return k.lag > 0;
    return true;
}

}  // namespace

double CalibrationResult::mae_of(std::string_view category, bool existing) const {
    for (const auto& e : mae) {
        if (e.category == category && e.existing == existing) return e.mae;
    }
    throw OutOfRange("no MAE entry for " + std::string(category));
}

double CalibrationResult::overall_mae() const {
    if (rows.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& r : rows) sum += std::abs(r.reference - r.predicted);
    return sum / static_cast<double>(rows.size());
}

CalibrationResult cmd_confidence_eval(const HarnessConfig& cfg) {
    cfg.validate();
    cfg.bootstrap.validate();
    std::vector<CalibrationModel> models(static_cast<std::size_t>(cfg.n_models));
    parallel_for(models.size(), cfg.workers, [&](std::size_t m) {
        models[m] = run_calibration_model(cfg, static_cast<int>(m));
    });
    CalibrationResult out;
    for (auto& m : models) out.rows.insert(out.rows.end(), m.rows.begin(), m.rows.end());
    for (const char* category : {"all", "contemp", "lagged"}) {
        for (bool existing : {false, true}) {
            MaeEntry e{category, existing, 0.0, 0};
            for (const auto& r : out.rows) {
                if (!in_calibration_category(r.key, category)) continue;
                if ((r.true_mark != LinkType::Absent) != existing) continue;
                e.mae += std::abs(r.reference - r.predicted);
                ++e.n_pairs;
            }
            if (e.n_pairs > 0) e.mae /= static_cast<double>(e.n_pairs);
            out.mae.push_back(e);
        }
    }
    if (!cfg.out_dir.empty()) {
        const fs::path dir(cfg.out_dir);
        write_text_file((dir / "config.txt").string(), dump_config(cfg));
        write_text_file((dir / "calibration.csv").string(), calibration_csv(out));
        write_text_file((dir / "calibration_summary.csv").string(), calibration_summary_csv(out));
        write_text_file((dir / "calibration_bins.csv").string(), calibration_bins_csv(out));
    }
    return out;
}

std::string calibration_csv(const CalibrationResult& r) {
    std::ostringstream os;
    os << "model,i,tau,j,true_mark,reference_mark,reference,predicted,predicted_std\n";
    for (const auto& row : r.rows) {
        os << row.model << ',' << row.key.source << ',' << row.key.lag << ',' << row.key.target
           << ',' << to_token(row.true_mark) << ',' << to_token(row.reference_mark) << ','
           << format_double(row.reference) << ',' << format_double(row.predicted) << ','
           << format_double(row.predicted_std) << '\n';
    }
    return os.str();
}

std::string calibration_summary_csv(const CalibrationResult& r) {
    std::ostringstream os;
    os << "category,links,mae,n_pairs\n";
    for (const auto& e : r.mae) {
        os << e.category << ',' << (e.existing ? "existing" : "absent") << ','
           << format_double(e.mae) << ',' << e.n_pairs << '\n';
    }
    os << "all,any," << format_double(r.overall_mae()) << ',' << r.rows.size() << '\n';
    return os.str();
}

std::string calibration_bins_csv(const CalibrationResult& r, int n_bins) {
    std::vector<double> ref(n_bins, 0.0), pred(n_bins, 0.0);
    std::vector<std::size_t> count(n_bins, 0);
    for (const auto& row : r.rows) {
        const int b = std::min(n_bins - 1, static_cast<int>(row.reference * n_bins));
        ref[b] += row.reference;
        pred[b] += row.predicted;
        ++count[b];
    }
    std::ostringstream os;
    os << "bin_lo,bin_hi,n_pairs,mean_reference,mean_predicted\n";
    for (int b = 0; b < n_bins; ++b) {
        os << format_double(static_cast<double>(b) / n_bins) << ','
           << format_double(static_cast<double>(b + 1) / n_bins) << ',' << count[b] << ',';
        if (count[b]) {
            os << format_double(ref[b] / count[b]) << ',' << format_double(pred[b] / count[b]);
        } else {
            os << ',';
        }
        os << '\n';
    }
    return os.str();
}

// ---- discover / generate ----

DiscoverResult cmd_discover(const TimeSeriesDataset& data, const HarnessConfig& cfg, int B) {
    cfg.discovery.validate();
    if (cfg.oracle_ci) throw ConfigError("discover: the oracle test needs a ground-truth graph");
    if (B < 0) throw ConfigError("B must be >= 0");
    default_index_set(data.length(), cfg.discovery.tau_max);
    DiscoverResult out;
    if (B == 0) {
        out.ensemble = make_ensemble({run_algorithm(cfg.algorithm, data, cfg.discovery)},
                                     cfg.bootstrap.aggregation);
    } else {
        BootstrapConfig bc = cfg.bootstrap;
        bc.B = B;
        bc.seed = cfg.seed;
        out.ensemble = run_bagged(data, cfg.algorithm, cfg.discovery, bc, cfg.workers);
    }
    if (!cfg.out_dir.empty()) {
        const fs::path dir(cfg.out_dir);
        fs::create_directories(dir);
        write_graph_file(out.ensemble.bagged, (dir / "graph.txt").string());
        write_text_file((dir / "frequencies.csv").string(), frequency_csv(out.ensemble.freq));
        write_text_file((dir / "confidence.csv").string(), confidence_csv(out.ensemble));
    }
    return out;
}

std::string describe_model(const StructuralCausalModel& scm) {
    std::ostringstream os;
    os << "n_vars " << scm.n_vars << '\n';
    for (int j = 0; j < scm.n_vars; ++j) {
        os << "auto " << j << ' ' << format_double(scm.auto_coeffs[j]) << '\n';
    }
    for (const auto& l : scm.cross_links) {
        os << "link " << l.source << ' ' << l.lag << ' ' << l.target << ' '
           << format_double(l.coefficient) << ' '
           << (l.func == DependencyFunc::Linear ? "linear" : "nonlinear") << '\n';
    }
    for (int j = 0; j < scm.n_vars; ++j) {
        const auto& n = scm.noise[j];
        os << "noise " << j << ' ' << (n.kind == NoiseKind::Gaussian ? "gaussian" : "weibull")
           << ' ' << format_double(n.sigma) << ' ' << format_double(n.weibull_shape) << '\n';
    }
    return os.str();
}

ModelSample cmd_generate(const HarnessConfig& cfg) {
    cfg.validate();
    ModelSample s = draw_benchmark_model(cfg, 0);
    if (!cfg.out_dir.empty()) {
        const fs::path dir(cfg.out_dir);
        fs::create_directories(dir);
        write_csv(s.data, (dir / "data.csv").string());
        write_graph_file(s.truth, (dir / "true_graph.txt").string());
        write_text_file((dir / "model.txt").string(), describe_model(s.scm));
    }
    return s;
}

}  // namespace tsbag
