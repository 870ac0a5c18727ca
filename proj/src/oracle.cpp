#include "tsbag/ci_tests.hpp"

#include "tsbag/errors.hpp"

#include <deque>

namespace tsbag {

OracleTest::OracleTest(const TimeSeriesGraph& truth, int tau_max)
    : n_vars_(truth.n_vars()), slices_(3 * tau_max + 1) {
    for (const PairKey& k : truth.pair_keys()) {
        const LinkType m = truth.get(k);
        if (m == LinkType::Unoriented || m == LinkType::Conflict) {
            throw NotADag("oracle truth contains a non-directed mark at (" +
                          std::to_string(k.source) + ", " + std::to_string(k.lag) + ", " +
                          std::to_string(k.target) + ")");
        }
    }
    if (has_contemporaneous_cycle(truth)) throw NotADag("oracle truth has a contemporaneous cycle");

    const int nodes = n_vars_ * slices_;
    parents_.assign(nodes, {});
    children_.assign(nodes, {});
    auto add_edge = [&](int from, int to) {
        parents_[to].push_back(from);
        children_[from].push_back(to);
    };
    // Stationary repetition of every edge inside the window.
    for (int s = 0; s < slices_; ++s) {
        for (int tau = 0; tau <= truth.tau_max(); ++tau) {
            if (s - tau < 0) break;
            for (int i = 0; i < n_vars_; ++i) {
                for (int j = 0; j < n_vars_; ++j) {
                    if (tau == 0 && i == j) continue;
                    if (truth.get(i, tau, j) == LinkType::DirectedTo) {
                        add_edge((s - tau) * n_vars_ + i, s * n_vars_ + j);
                    }
                }
            }
        }
    }
}

int OracleTest::node(Variable v) const {
    if (v.var < 0 || v.var >= n_vars_ || v.lag < 0 || v.lag >= slices_) {
        throw OutOfRange("variable (" + std::to_string(v.var) + ", lag " + std::to_string(v.lag) +
                         ") outside the unrolled window");
    }
    return (slices_ - 1 - v.lag) * n_vars_ + v.var;
}

bool OracleTest::separated(Variable x, Variable y, std::span<const Variable> z) const {
    const int nodes = static_cast<int>(parents_.size());
    const int src = node(x);
    const int dst = node(y);
    std::vector<char> in_z(nodes, 0);
    for (Variable v : z) in_z[node(v)] = 1;
    if (in_z[src] || in_z[dst]) return true;

    // Nodes that are in Z or have a descendant in Z: colliders there are open.
    std::vector<char> anc(nodes, 0);
    std::vector<int> stack;
    for (int v = 0; v < nodes; ++v) {
        if (in_z[v]) {
            anc[v] = 1;
            stack.push_back(v);
        }
    }
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int p : parents_[v]) {
            if (!anc[p]) {
                anc[p] = 1;
                stack.push_back(p);
            }
        }
    }

    // Reachability over (node, direction) states; "up" = arrived from a child.
    std::vector<char> seen_up(nodes, 0), seen_down(nodes, 0);
    std::deque<std::pair<int, bool>> queue{{src, true}};
    while (!queue.empty()) {
        const auto [v, up] = queue.front();
        queue.pop_front();
        if (up ? seen_up[v] : seen_down[v]) continue;
        (up ? seen_up : seen_down)[v] = 1;
        if (v == dst) return false;
        if (up) {
            if (in_z[v]) continue;
            for (int p : parents_[v]) queue.emplace_back(p, true);
            for (int c : children_[v]) queue.emplace_back(c, false);
        } else {
            if (!in_z[v]) {
                for (int c : children_[v]) queue.emplace_back(c, false);
            }
            if (anc[v]) {
                for (int p : parents_[v]) queue.emplace_back(p, true);
            }
        }
    }
    return true;
}

CITestResult OracleTest::test(Variable x, Variable y, std::span<const Variable> z) const {
    CITestResult res;
    res.p_value = separated(x, y, z) ? 1.0 : 0.0;
    res.statistic = 1.0 - res.p_value;
    return res;
}

CITestResult oracle_ci(const TimeSeriesGraph& truth, Variable x, Variable y,
                       std::span<const Variable> z, int tau_max) {
    return OracleTest(truth, tau_max).test(x, y, z);
}

}  // namespace tsbag
