#include "tsbag/pcmci.hpp"

#include <vector>

namespace tsbag {

namespace {

constexpr unsigned kTowardTarget = 1;  // canonical i < j edge becomes i --> j
constexpr unsigned kTowardSource = 2;  // canonical i < j edge becomes i <-- j

// Pending orientation demands on contemporaneous edges, applied in one batch.
class Demands {
public:
    explicit Demands(int n) : n_(n), bits_(static_cast<std::size_t>(n) * n, 0) {}

    /// Demand the contemporaneous edge between `from` and `to` to read from --> to.
    void orient(int from, int to) {
        if (from < to) {
            bits_[from * n_ + to] |= kTowardTarget;
        } else {
            bits_[to * n_ + from] |= kTowardSource;
        }
        any_ = true;
    }
    bool any() const { return any_; }

    /// Applies every demand; contradictions (with each other or with an
    /// existing orientation) become conflict marks.
    void apply(TimeSeriesGraph& g) const {
        for (int i = 0; i < n_; ++i) {
            for (int j = i + 1; j < n_; ++j) {
                const unsigned b = bits_[i * n_ + j];
                if (b == 0) continue;
                const LinkType want = b == (kTowardTarget | kTowardSource) ? LinkType::Conflict
                                      : b == kTowardTarget                ? LinkType::DirectedTo
                                                                          : LinkType::DirectedFrom;
                const LinkType cur = g.get(i, 0, j);
                if (cur == LinkType::Unoriented || cur == want) {
                    g.set(i, 0, j, want);
                } else if (cur != LinkType::Absent) {
                    g.set(i, 0, j, LinkType::Conflict);
                }
            }
        }
    }

private:
    int n_;
    std::vector<unsigned> bits_;
    bool any_ = false;
};

}  // namespace

TimeSeriesGraph orient_colliders(const TimeSeriesGraph& skeleton, const SepSetStore& sepsets) {
    TimeSeriesGraph g = skeleton;
    const int n = g.n_vars();
    Demands demands(n);
    std::vector<Variable> nb;
    for (int c = 0; c < n; ++c) {
        nb.clear();
        for (const PairKey& k : adjacency_set(skeleton, c)) nb.push_back({k.source, k.lag});
        for (std::size_t a = 0; a < nb.size(); ++a) {
            for (std::size_t b = a + 1; b < nb.size(); ++b) {
                const Variable va = nb[a];
                const Variable vb = nb[b];
                if (va.lag > 0 && vb.lag > 0) continue;  // lagged edges are already oriented
                const Variable early = va.lag >= vb.lag ? va : vb;
                const Variable late = va.lag >= vb.lag ? vb : va;
                const int gap = early.lag - late.lag;
                if (gap > g.tau_max()) continue;
                const PairKey ab{early.var, gap, late.var};
                if (skeleton.get(ab) != LinkType::Absent) continue;  // shielded
                // The middle node X^c_t sits at the later endpoint's time step.
                if (sepsets.contains(ab, Variable{c, 0})) continue;
                if (va.lag == 0) demands.orient(va.var, c);
                if (vb.lag == 0) demands.orient(vb.var, c);
            }
        }
    }
    demands.apply(g);
    return g;
}

namespace {

bool adjacent(const TimeSeriesGraph& g, int a, int tau, int b) {
    if (tau == 0 && a == b) return true;
    return g.get(a, tau, b) != LinkType::Absent;
}

bool directed(const TimeSeriesGraph& g, int a, int tau, int b) {
    return g.get(a, tau, b) == LinkType::DirectedTo;
}

bool undirected(const TimeSeriesGraph& g, int a, int b) {
    return g.get(a, 0, b) == LinkType::Unoriented;
}

// Whether any of R1-R4 orients the o-o edge x - y as x --> y.
bool meek_orients(const TimeSeriesGraph& g, int x, int y) {
    const int n = g.n_vars();
    // R1: a --> x o-o y with a, y non-adjacent (a may be lagged).
    for (int tau = 0; tau <= g.tau_max(); ++tau) {
        for (int a = 0; a < n; ++a) {
            if (tau == 0 && (a == x || a == y)) continue;
            if (directed(g, a, tau, x) && !adjacent(g, a, tau, y)) return true;
        }
    }
    for (int z = 0; z < n; ++z) {
        if (z == x || z == y) continue;
        // R2: x --> z --> y.
        if (directed(g, x, 0, z) && directed(g, z, 0, y)) return true;
    }
    for (int z = 0; z < n; ++z) {
        if (z == x || z == y) continue;
        for (int w = 0; w < n; ++w) {
            if (w == x || w == y || w == z) continue;
            // R3: x o-o z --> y, x o-o w --> y, z and w non-adjacent.
            if (z < w && undirected(g, x, z) && undirected(g, x, w) && directed(g, z, 0, y) &&
                directed(g, w, 0, y) && !adjacent(g, z, 0, w)) {
                return true;
            }
            // R4: x o-o w --> z --> y, x adjacent to z, w and y non-adjacent.
            if (undirected(g, x, w) && directed(g, w, 0, z) && directed(g, z, 0, y) &&
                adjacent(g, x, 0, z) && !adjacent(g, w, 0, y)) {
                return true;
            }
        }
    }
    return false;
}

}  // namespace

TimeSeriesGraph apply_meek_rules(const TimeSeriesGraph& input) {
    TimeSeriesGraph g = input;
    const int n = g.n_vars();
    while (true) {
        Demands demands(n);
        for (int x = 0; x < n; ++x) {
            for (int y = 0; y < n; ++y) {
                if (x != y && undirected(g, x, y) && meek_orients(g, x, y)) demands.orient(x, y);
            }
        }
        if (!demands.any()) break;
        demands.apply(g);
    }
    return g;
}

}  // namespace tsbag
