#include "tsbag/metrics.hpp"

#include "tsbag/errors.hpp"

#include <algorithm>

namespace tsbag {

std::string_view category_name(LinkCategory c) {
    switch (c) {
        case LinkCategory::LaggedCross: return "lagged";
        case LinkCategory::Contemporaneous: return "contemp";
        case LinkCategory::Auto: return "auto";
        case LinkCategory::All: return "all";
    }
    return "?";
}

bool in_category(const PairKey& key, LinkCategory c) {
    switch (c) {
        case LinkCategory::LaggedCross: return key.lag > 0 && key.source != key.target;
        case LinkCategory::Contemporaneous: return key.lag == 0;
        case LinkCategory::Auto: return key.lag > 0 && key.source == key.target;
        case LinkCategory::All: return true;
    }
    return false;
}

double f1_score(double precision, double recall) {
    if (precision + recall <= 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

namespace {

void require_same_shape(const TimeSeriesGraph& a, const TimeSeriesGraph& b) {
    if (!a.same_shape(b)) throw ShapeMismatch("metrics: graph shapes differ");
}

}  // namespace

AdjacencyMetrics adjacency_metrics(const TimeSeriesGraph& est, const TimeSeriesGraph& truth,
                                   LinkCategory category) {
    require_same_shape(est, truth);
    long tp = 0, fp = 0, fn = 0, tn = 0;
    for (const PairKey& k : truth.pair_keys()) {
        if (!in_category(k, category)) continue;
        const bool e = est.get(k) != LinkType::Absent;
        const bool t = truth.get(k) != LinkType::Absent;
        if (e && t) ++tp;
        else if (e) ++fp;
        else if (t) ++fn;
        else ++tn;
    }
    AdjacencyMetrics m;
    m.no_estimated = tp + fp == 0;
    m.no_true = tp + fn == 0;
    m.no_negatives = fp + tn == 0;
    m.precision = m.no_estimated ? 1.0 : static_cast<double>(tp) / (tp + fp);
    m.recall = m.no_true ? 1.0 : static_cast<double>(tp) / (tp + fn);
    m.fpr = m.no_negatives ? 0.0 : static_cast<double>(fp) / (fp + tn);
    m.f1 = f1_score(m.precision, m.recall);
    return m;
}

OrientationMetrics orientation_metrics(const TimeSeriesGraph& est, const TimeSeriesGraph& truth) {
    require_same_shape(est, truth);
    long correct = 0, estimated = 0, real = 0;
    for (const PairKey& k : truth.pair_keys()) {
        if (k.lag != 0) continue;
        const LinkType e = est.get(k);
        const LinkType t = truth.get(k);
        if (e != LinkType::Absent) ++estimated;
        if (t != LinkType::Absent) ++real;
        if (e != LinkType::Absent && is_directed(e) && e == t) ++correct;
    }
    OrientationMetrics m;
    m.no_estimated = estimated == 0;
    m.no_true = real == 0;
    m.precision = m.no_estimated ? 1.0 : static_cast<double>(correct) / estimated;
    m.recall = m.no_true ? 1.0 : static_cast<double>(correct) / real;
    m.f1 = f1_score(m.precision, m.recall);
    return m;
}

double conflict_fraction(const TimeSeriesGraph& est) {
    long conflicts = 0, present = 0;
    for (const PairKey& k : est.pair_keys()) {
        if (k.lag != 0) continue;
        const LinkType e = est.get(k);
        if (e == LinkType::Absent) continue;
        ++present;
        if (e == LinkType::Conflict) ++conflicts;
    }
    return present == 0 ? 0.0 : static_cast<double>(conflicts) / present;
}

MetricsReport evaluate(const TimeSeriesGraph& est, const TimeSeriesGraph& truth,
                       double runtime_seconds) {
    MetricsReport r;
    for (LinkCategory c : kAllCategories) {
        r.adjacency[static_cast<std::size_t>(c)] = adjacency_metrics(est, truth, c);
    }
    r.orientation = orientation_metrics(est, truth);
    r.conflict_fraction = conflict_fraction(est);
    r.runtime_seconds = runtime_seconds;
    return r;
}

std::vector<std::string> MetricsReport::column_names() {
    std::vector<std::string> names;
    for (LinkCategory c : kAllCategories) {
        const std::string p(category_name(c));
        for (const char* m : {"_adj_precision", "_adj_recall", "_adj_f1", "_fpr"}) {
            names.push_back(p + m);
        }
    }
    names.insert(names.end(), {"contemp_orient_precision", "contemp_orient_recall",
                               "contemp_orient_f1", "contemp_conflict_fraction"});
    return names;
}

std::vector<double> MetricsReport::to_values() const {
    std::vector<double> v;
    for (const auto& a : adjacency) v.insert(v.end(), {a.precision, a.recall, a.f1, a.fpr});
    v.insert(v.end(),
             {orientation.precision, orientation.recall, orientation.f1, conflict_fraction});
    return v;
}

double pr_auc(std::vector<std::pair<double, double>> points) {
    std::sort(points.begin(), points.end());
    std::vector<std::pair<double, double>> curve;
    for (const auto& p : points) {
        if (!curve.empty() && curve.back().first == p.first) {
            curve.back().second = std::max(curve.back().second, p.second);
        } else {
            curve.push_back(p);
        }
    }
    if (curve.size() < 2) throw InsufficientPoints("pr_auc: need two distinct recall values");
    double area = 0.0;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        area += (curve[i].first - curve[i - 1].first) * (curve[i].second + curve[i - 1].second) / 2;
    }
    return area;
}

}  // namespace tsbag
