#include "tsbag/dataset.hpp"

#include "tsbag/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

namespace tsbag {

TimeSeriesDataset::TimeSeriesDataset(std::size_t length, std::size_t n_vars)
    : length_(length), n_vars_(n_vars), values_(length * n_vars, 0.0) {}

TimeSeriesDataset::TimeSeriesDataset(std::size_t length, std::size_t n_vars,
                                     std::vector<double> row_major)
    : length_(length), n_vars_(n_vars), values_(std::move(row_major)) {
    if (values_.size() != length_ * n_vars_) {
        throw ShapeMismatch("dataset buffer has " + std::to_string(values_.size()) +
                            " values, expected " + std::to_string(length_ * n_vars_));
    }
}

TimeSeriesDataset TimeSeriesDataset::permuted_columns(std::span<const int> perm) const {
    if (perm.size() != n_vars_) throw ShapeMismatch("permutation length differs from n_vars");
    TimeSeriesDataset out(length_, n_vars_);
    for (std::size_t t = 0; t < length_; ++t) {
        for (std::size_t k = 0; k < n_vars_; ++k) {
            out(t, k) = (*this)(t, static_cast<std::size_t>(perm[k]));
        }
    }
    return out;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_cells(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(trim(line.substr(start)));
            break;
        }
        cells.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return cells;
}

std::optional<double> parse_number(std::string_view cell) {
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

}  // namespace

TimeSeriesDataset parse_csv(std::string_view text) {
    std::vector<double> values;
    std::size_t n_cols = 0;
    std::size_t rows = 0;
    std::size_t line_no = 0;
    bool first_content_line = true;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        const std::string_view line = trim(text.substr(pos, eol - pos));
        pos = eol + 1;
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split_cells(line);
        if (first_content_line) {
            first_content_line = false;
            n_cols = cells.size();
            bool all_text = true;
            for (auto c : cells) all_text = all_text && !parse_number(c).has_value();
            if (all_text) continue;  // header
        }
        if (cells.size() != n_cols) {
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(n_cols) + " columns, found " +
                             std::to_string(cells.size()));
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const auto v = parse_number(cells[c]);
            if (!v) {
                throw ParseError("line " + std::to_string(line_no) + ", column " +
                                 std::to_string(c + 1) + ": non-numeric cell '" +
                                 std::string(cells[c]) + "'");
            }
            values.push_back(*v);
        }
        ++rows;
    }
    if (rows == 0 || n_cols == 0) throw ParseError("no data rows");
    return TimeSeriesDataset(rows, n_cols, std::move(values));
}

TimeSeriesDataset read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str());
}

std::string to_csv(const TimeSeriesDataset& data) {
    std::string out;
    for (std::size_t t = 0; t < data.length(); ++t) {
        for (std::size_t j = 0; j < data.n_vars(); ++j) {
            if (j) out += ',';
            out += format_double(data(t, j));
        }
        out += '\n';
    }
    return out;
}

void write_csv(const TimeSeriesDataset& data, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << to_csv(data);
}

}  // namespace tsbag
