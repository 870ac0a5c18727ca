#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tsbag {

/// T x N real-valued matrix, one row per time step, stored row-major.
class TimeSeriesDataset {
public:
    TimeSeriesDataset() = default;
    TimeSeriesDataset(std::size_t length, std::size_t n_vars);
    TimeSeriesDataset(std::size_t length, std::size_t n_vars, std::vector<double> row_major);

    std::size_t length() const { return length_; }
    std::size_t n_vars() const { return n_vars_; }

    double operator()(std::size_t t, std::size_t j) const { return values_[t * n_vars_ + j]; }
    double& operator()(std::size_t t, std::size_t j) { return values_[t * n_vars_ + j]; }

    std::span<const double> row(std::size_t t) const {
        return {values_.data() + t * n_vars_, n_vars_};
    }
    const std::vector<double>& values() const { return values_; }

    /// Column k of the result is column perm[k] of this dataset.
    TimeSeriesDataset permuted_columns(std::span<const int> perm) const;

    bool operator==(const TimeSeriesDataset&) const = default;

private:
    std::size_t length_ = 0;
    std::size_t n_vars_ = 0;
    std::vector<double> values_;
};

// CSV rows are time steps, columns are variables. A first row whose cells
// are all non-numeric is taken as a header. Missing cells are rejected.
TimeSeriesDataset parse_csv(std::string_view text);
TimeSeriesDataset read_csv(const std::string& path);
std::string to_csv(const TimeSeriesDataset& data);
void write_csv(const TimeSeriesDataset& data, const std::string& path);

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double v);

}  // namespace tsbag
