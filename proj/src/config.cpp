#include "tsbag/errors.hpp"
#include "tsbag/harness.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace tsbag {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
    throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key));
}

template <class T>
T parse_number(std::string_view key, std::string_view value) {
    value = trim(value);
    T out{};
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) {
        bad_value(key, value);
    }
    return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
    value = trim(value);
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    bad_value(key, value);
}

std::optional<int> parse_optional_int(std::string_view key, std::string_view value) {
    value = trim(value);
    if (value == "none" || value.empty()) return std::nullopt;
    return parse_number<int>(key, value);
}

std::string optional_text(const std::optional<int>& v) {
    return v ? std::to_string(*v) : "none";
}

}  // namespace

std::string algorithm_name(Algorithm a) {
    return a == Algorithm::PCMCIPlus ? "pcmci+" : "pc";
}

Algorithm parse_algorithm(std::string_view s) {
    s = trim(s);
    if (s == "pcmci+" || s == "pcmciplus") return Algorithm::PCMCIPlus;
    if (s == "pc") return Algorithm::PCTimeSeries;
    bad_value("algorithm", s);
}

Aggregation parse_aggregation(std::string_view s) {
    s = trim(s);
    if (s == "majority") return Aggregation::Majority;
    if (s == "two-stage") return Aggregation::TwoStage;
    bad_value("aggregation", s);
}

void apply_setting(HarnessConfig& cfg, std::string_view key, std::string_view value) {
    key = trim(key);
    value = trim(value);
    auto& g = cfg.generator;
    auto& d = cfg.discovery;
    if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "n_models") cfg.n_models = parse_number<int>(key, value);
    else if (key == "T") cfg.T = parse_number<std::size_t>(key, value);
    else if (key == "workers") cfg.workers = parse_number<int>(key, value);
    else if (key == "out") cfg.out_dir = std::string(value);
    else if (key == "oracle_ci") cfg.oracle_ci = parse_bool(key, value);
    else if (key == "resume") cfg.resume = parse_bool(key, value);
    else if (key == "max_model_retries") cfg.max_model_retries = parse_number<int>(key, value);
    else if (key == "algorithm") cfg.algorithm = parse_algorithm(value);
    else if (key == "n_vars") g.n_vars = parse_number<int>(key, value);
    else if (key == "autocorr") g.autocorr = parse_number<double>(key, value);
    else if (key == "frac_contemporaneous") g.frac_contemporaneous = parse_number<double>(key, value);
    else if (key == "max_true_lag") g.max_true_lag = parse_number<int>(key, value);
    else if (key == "frac_nonlinear") g.frac_nonlinear = parse_number<double>(key, value);
    else if (key == "noise_mix") g.noise_mix = parse_number<double>(key, value);
    else if (key == "n_cross_links") g.n_cross_links = parse_optional_int(key, value);
    else if (key == "max_attempts") g.max_attempts = parse_number<int>(key, value);
    else if (key == "tau_max") d.tau_max = parse_number<int>(key, value);
    else if (key == "pc1_max_conds") d.pc1_max_conds = parse_optional_int(key, value);
    else if (key == "max_contemp_conds") d.max_contemp_conds = parse_optional_int(key, value);
    else if (key == "max_conds_px") d.max_conds_px = parse_optional_int(key, value);
    else if (key == "max_conds_dim") d.max_conds_dim = parse_optional_int(key, value);
    else if (key == "B") cfg.bootstrap.B = parse_number<int>(key, value);
    else if (key == "aggregation") cfg.bootstrap.aggregation = parse_aggregation(value);
    else if (key == "D") cfg.D = parse_number<int>(key, value);
    else if (key == "mode") {
        if (value == "mean-calibration") cfg.mode = CalibrationMode::MeanCalibration;
        else if (value == "single-sample") cfg.mode = CalibrationMode::SingleSampleMAE;
        else bad_value(key, value);
    } else if (key == "alpha") {
        // One value sets alpha_pc; a comma-separated list is a sweep.
        std::vector<double> alphas;
        std::size_t start = 0;
        while (start <= value.size()) {
            const auto comma = value.find(',', start);
            const auto end = comma == std::string_view::npos ? value.size() : comma;
            alphas.push_back(parse_number<double>(key, value.substr(start, end - start)));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        d.alpha_pc = alphas.front();
        cfg.alpha_sweep = alphas.size() > 1 ? alphas : std::vector<double>{};
    } else {
        throw ConfigError("unknown setting '" + std::string(key) + "'");
    }
}

void apply_config_text(HarnessConfig& cfg, std::string_view text) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        try {
            apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
}

void apply_config_file(HarnessConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    apply_config_text(cfg, ss.str());
}

std::string dump_config(const HarnessConfig& cfg) {
    const auto& g = cfg.generator;
    const auto& d = cfg.discovery;
    std::ostringstream os;
    os << "seed = " << cfg.seed << '\n'
       << "n_models = " << cfg.n_models << '\n'
       << "T = " << cfg.T << '\n'
       << "algorithm = " << algorithm_name(cfg.algorithm) << '\n'
       << "oracle_ci = " << (cfg.oracle_ci ? "true" : "false") << '\n'
       << "max_model_retries = " << cfg.max_model_retries << '\n'
       << "n_vars = " << g.n_vars << '\n'
       << "autocorr = " << format_double(g.autocorr) << '\n'
       << "frac_contemporaneous = " << format_double(g.frac_contemporaneous) << '\n'
       << "max_true_lag = " << g.max_true_lag << '\n'
       << "frac_nonlinear = " << format_double(g.frac_nonlinear) << '\n'
       << "noise_mix = " << format_double(g.noise_mix) << '\n'
       << "n_cross_links = " << optional_text(g.n_cross_links) << '\n'
       << "max_attempts = " << g.max_attempts << '\n'
       << "tau_max = " << d.tau_max << '\n'
       << "alpha = ";
    const auto alphas = cfg.alphas();
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        os << (i ? "," : "") << format_double(alphas[i]);
    }
    os << '\n'
       << "pc1_max_conds = " << optional_text(d.pc1_max_conds) << '\n'
       << "max_contemp_conds = " << optional_text(d.max_contemp_conds) << '\n'
       << "max_conds_px = " << optional_text(d.max_conds_px) << '\n'
       << "max_conds_dim = " << optional_text(d.max_conds_dim) << '\n'
       << "B = " << cfg.bootstrap.B << '\n'
       << "aggregation = "
       << (cfg.bootstrap.aggregation == Aggregation::Majority ? "majority" : "two-stage") << '\n'
       << "D = " << cfg.D << '\n'
       << "mode = "
       << (cfg.mode == CalibrationMode::MeanCalibration ? "mean-calibration" : "single-sample")
       << '\n';
    return os.str();
}

std::vector<double> HarnessConfig::alphas() const {
    return alpha_sweep.empty() ? std::vector<double>{discovery.alpha_pc} : alpha_sweep;
}

void HarnessConfig::validate() const {
    generator.validate();
    discovery.validate();
    if (n_models < 1) throw ConfigError("n_models must be >= 1");
    if (workers < 1) throw ConfigError("workers must be >= 1");
    if (D < 2) throw ConfigError("D must be >= 2");
    if (bootstrap.B < 0) throw ConfigError("B must be >= 0");
    if (max_model_retries < 0) throw ConfigError("max_model_retries must be >= 0");
    for (double a : alphas()) {
        if (!(a > 0.0 && a < 1.0)) throw ConfigError("alpha values must lie in (0, 1)");
    }
    if (generator.max_true_lag > discovery.tau_max) {
        throw ConfigError("max_true_lag exceeds tau_max");
    }
    if (T <= static_cast<std::size_t>(2 * discovery.tau_max)) {
        throw ConfigError("T must exceed 2 * tau_max");
    }
}

}  // namespace tsbag
