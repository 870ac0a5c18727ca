#pragma once

#include "tsbag/graph.hpp"

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tsbag {

enum class LinkCategory { LaggedCross, Contemporaneous, Auto, All };

inline constexpr std::array<LinkCategory, 4> kAllCategories{
    LinkCategory::LaggedCross, LinkCategory::Contemporaneous, LinkCategory::Auto,
    LinkCategory::All};

/// Column prefix: "lagged", "contemp", "auto", "all".
std::string_view category_name(LinkCategory c);
bool in_category(const PairKey& key, LinkCategory c);

struct AdjacencyMetrics {
    double precision = 1.0;
    double recall = 1.0;
    double f1 = 1.0;
    double fpr = 0.0;
    // Set when the matching denominator was zero and the convention applied.
    bool no_estimated = false;
    bool no_true = false;
    bool no_negatives = false;
};

struct OrientationMetrics {
    double precision = 1.0;
    double recall = 1.0;
    double f1 = 1.0;
    bool no_estimated = false;
    bool no_true = false;
};

struct MetricsReport {
    std::array<AdjacencyMetrics, 4> adjacency;  // indexed like kAllCategories
    OrientationMetrics orientation;
    double conflict_fraction = 0.0;
    double runtime_seconds = 0.0;

    const AdjacencyMetrics& adj(LinkCategory c) const {
        return adjacency[static_cast<std::size_t>(c)];
    }

    /// Fixed column order of to_values().
    static std::vector<std::string> column_names();
    std::vector<double> to_values() const;
};

/// F1 as the harmonic mean; 0 when both inputs are 0.
double f1_score(double precision, double recall);

AdjacencyMetrics adjacency_metrics(const TimeSeriesGraph& est, const TimeSeriesGraph& truth,
                                   LinkCategory category);
OrientationMetrics orientation_metrics(const TimeSeriesGraph& est, const TimeSeriesGraph& truth);
double conflict_fraction(const TimeSeriesGraph& est);

MetricsReport evaluate(const TimeSeriesGraph& est, const TimeSeriesGraph& truth,
                       double runtime_seconds = 0.0);

/// Area under (recall, precision) points by the trapezoid rule between
/// observed points, after collapsing equal recalls to their best precision.
double pr_auc(std::vector<std::pair<double, double>> points);

}  // namespace tsbag
