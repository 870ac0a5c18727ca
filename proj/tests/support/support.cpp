#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

namespace tsbag::support {

namespace {

using Node = std::pair<int, int>;  // (var, lag)

bool adjacent_nodes(const TimeSeriesGraph& g, Node a, Node b) {
    if (a.second < b.second) std::swap(a, b);
    const int gap = a.second - b.second;
    if (gap > g.tau_max()) return false;
    return g.get(a.first, gap, b.first) != LinkType::Absent;
}

// Unshielded colliders into X^c_t with at least one contemporaneous arm,
// each as (c, earlier parent, later parent).
std::set<std::tuple<int, Node, Node>> colliders(const TimeSeriesGraph& g) {
    std::set<std::tuple<int, Node, Node>> out;
    for (int c = 0; c < g.n_vars(); ++c) {
        std::vector<Node> parents;
        for (int tau = 0; tau <= g.tau_max(); ++tau) {
            for (int a = 0; a < g.n_vars(); ++a) {
                if (tau == 0 && a == c) continue;
                if (g.get(a, tau, c) == LinkType::DirectedTo) parents.push_back({a, tau});
            }
        }
        for (std::size_t x = 0; x < parents.size(); ++x) {
            for (std::size_t y = x + 1; y < parents.size(); ++y) {
                Node p = parents[x], q = parents[y];
                if (p.second > 0 && q.second > 0) continue;
                if (adjacent_nodes(g, p, q)) continue;
                out.insert({c, std::min(p, q), std::max(p, q)});
            }
        }
    }
    return out;
}

}  // namespace

TimeSeriesGraph brute_force_pattern(const TimeSeriesGraph& truth) {
    std::vector<PairKey> edges;
    for (const PairKey& k : truth.pair_keys()) {
        if (k.lag == 0 && truth.get(k) != LinkType::Absent) edges.push_back(k);
    }
    const auto target = colliders(truth);
    std::vector<TimeSeriesGraph> members;
    for (unsigned mask = 0; mask < (1u << edges.size()); ++mask) {
        TimeSeriesGraph g = truth;
        for (std::size_t e = 0; e < edges.size(); ++e) {
            g.set(edges[e], (mask >> e) & 1 ? LinkType::DirectedFrom : LinkType::DirectedTo);
        }
        if (has_contemporaneous_cycle(g)) continue;
        if (colliders(g) != target) continue;
        members.push_back(std::move(g));
    }
    TimeSeriesGraph out = truth;
    for (const PairKey& k : edges) {
        const LinkType m = members.front().get(k);
        const bool agree = std::all_of(members.begin(), members.end(),
                                       [&](const TimeSeriesGraph& g) { return g.get(k) == m; });
        out.set(k, agree ? m : LinkType::Unoriented);
    }
    return out;
}

double ks_uniform_pvalue(std::vector<double> sample) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        d = std::max(d, (i + 1) / n - sample[i]);
        d = std::max(d, sample[i] - i / n);
    }
    // Kolmogorov distribution with the usual small-sample correction.
    const double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
    if (lambda < 0.2) return 1.0;
    double p = 0.0;
    for (int k = 1; k <= 100; ++k) {
        p += 2.0 * (k % 2 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    }
    return std::clamp(p, 0.0, 1.0);
}

TimeSeriesGraph random_graph(int n_vars, int tau_max, double density, Rng& rng) {
    TimeSeriesGraph g(n_vars, tau_max);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> mark(1, kLinkTypeCount - 1);
    for (const PairKey& k : g.pair_keys()) {
        if (u(rng) >= density) continue;
        g.set(k, k.lag == 0 ? kAllLinkTypes[mark(rng)] : LinkType::DirectedTo);
    }
    return g;
}

TimeSeriesGraph unpermute(const TimeSeriesGraph& g, std::span<const int> perm) {
    TimeSeriesGraph out(g.n_vars(), g.tau_max());
    for (int tau = 0; tau <= g.tau_max(); ++tau) {
        for (int a = 0; a < g.n_vars(); ++a) {
            for (int b = 0; b < g.n_vars(); ++b) {
                if (tau == 0 && a == b) continue;
                out.set(perm[a], tau, perm[b], g.get(a, tau, b));
            }
        }
    }
    return out;
}

ModelDraw draw_model(const GeneratorConfig& cfg, int tau_max, std::uint64_t seed) {
    Rng rng = make_rng(seed, {});
    ModelDraw d{sample_model(cfg, rng), {}};
    d.truth = true_graph(d.scm, tau_max);
    return d;
}

}  // namespace tsbag::support
