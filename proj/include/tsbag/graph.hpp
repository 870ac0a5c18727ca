#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tsbag {

/// Edge mark between X^i_{t-tau} and X^j_t. Only Absent and DirectedTo are
/// legal for lagged pairs; the other three describe contemporaneous edges.
enum class LinkType : std::uint8_t {
    Absent = 0,
    DirectedTo,    // X^i --> X^j
    DirectedFrom,  // X^i <-- X^j
    Unoriented,    // o-o
    Conflict,      // x-x
};

inline constexpr int kLinkTypeCount = 5;

inline constexpr std::array<LinkType, kLinkTypeCount> kAllLinkTypes{
    LinkType::Absent, LinkType::DirectedTo, LinkType::DirectedFrom, LinkType::Unoriented,
    LinkType::Conflict};

constexpr int index_of(LinkType m) { return static_cast<int>(m); }

/// Mark as seen from the other endpoint of a contemporaneous edge.
constexpr LinkType mirror(LinkType m) {
    switch (m) {
        case LinkType::DirectedTo: return LinkType::DirectedFrom;
        case LinkType::DirectedFrom: return LinkType::DirectedTo;
        default: return m;
    }
}

constexpr bool is_directed(LinkType m) {
    return m == LinkType::DirectedTo || m == LinkType::DirectedFrom;
}

std::string_view to_token(LinkType m);
std::optional<LinkType> link_type_from_token(std::string_view token);

/// (source i, lag tau, target j): the pair (X^i_{t-tau}, X^j_t).
struct PairKey {
    int source = 0;
    int lag = 0;
    int target = 0;

    bool operator==(const PairKey&) const = default;
    // Canonical traversal order: lag, then source, then target.
    auto operator<=>(const PairKey& o) const {
        if (auto c = lag <=> o.lag; c != 0) return c;
        if (auto c = source <=> o.source; c != 0) return c;
        return target <=> o.target;
    }
};

/// Dense time-series graph over N variables and lags 0..tau_max.
///
/// Contemporaneous marks are stored once under the canonical key i < j;
/// accessors mirror them transparently, so get(j, 0, i) always returns
/// mirror(get(i, 0, j)).
class TimeSeriesGraph {
public:
    TimeSeriesGraph() = default;
    TimeSeriesGraph(int n_vars, int tau_max);

    int n_vars() const { return n_vars_; }
    int tau_max() const { return tau_max_; }

    LinkType get(int i, int tau, int j) const;
    void set(int i, int tau, int j, LinkType m);
    LinkType get(const PairKey& k) const { return get(k.source, k.lag, k.target); }
    void set(const PairKey& k, LinkType m) { set(k.source, k.lag, k.target, m); }

    bool same_shape(const TimeSeriesGraph& o) const {
        return n_vars_ == o.n_vars_ && tau_max_ == o.tau_max_;
    }

    /// Every canonical pair key (lagged: all i, j; lag 0: i < j), in
    /// PairKey order.
    std::vector<PairKey> pair_keys() const;
    std::size_t pair_count() const;

    /// Position of a canonical key in pair_keys(); used by dense tables.
    std::size_t dense_index(const PairKey& canonical) const;

    bool operator==(const TimeSeriesGraph& o) const = default;

private:
    std::size_t slot(int i, int tau, int j) const;
    void check(int i, int tau, int j) const;

    int n_vars_ = 0;
    int tau_max_ = 0;
    std::vector<LinkType> marks_;
};

/// Canonical form of a key: lag-0 keys are flipped so that source < target.
/// Returns whether the key was flipped (the stored mark must be mirrored).
PairKey canonical(const PairKey& k, bool* flipped = nullptr);

/// Non-future adjacencies of X^j_t, as keys (i, tau, j) with a non-Absent mark.
std::vector<PairKey> adjacency_set(const TimeSeriesGraph& g, int j);

struct MarkDiff {
    PairKey key;
    LinkType first;
    LinkType second;
};

bool graphs_equal(const TimeSeriesGraph& a, const TimeSeriesGraph& b);
std::vector<MarkDiff> diff(const TimeSeriesGraph& a, const TimeSeriesGraph& b);

/// True when the directed contemporaneous edges contain a cycle.
bool has_contemporaneous_cycle(const TimeSeriesGraph& g);

// Text format: header "N tau_max", then one "i tau j MARK" line per
// non-Absent canonical pair in PairKey order.
std::string serialize(const TimeSeriesGraph& g);
TimeSeriesGraph parse_graph(std::string_view text);
void write_graph_file(const TimeSeriesGraph& g, const std::string& path);
TimeSeriesGraph read_graph_file(const std::string& path);

}  // namespace tsbag
