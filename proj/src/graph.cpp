#include "tsbag/graph.hpp"

#include "tsbag/errors.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace tsbag {

std::string_view to_token(LinkType m) {
    switch (m) {
        case LinkType::Absent: return "none";
        case LinkType::DirectedTo: return "-->";
        case LinkType::DirectedFrom: return "<--";
        case LinkType::Unoriented: return "o-o";
        case LinkType::Conflict: return "x-x";
    }
    return "none";
}

std::optional<LinkType> link_type_from_token(std::string_view token) {
    for (LinkType m : kAllLinkTypes) {
        if (to_token(m) == token) return m;
    }
    return std::nullopt;
}

TimeSeriesGraph::TimeSeriesGraph(int n_vars, int tau_max) : n_vars_(n_vars), tau_max_(tau_max) {
    if (n_vars < 1 || tau_max < 0) {
        throw OutOfRange("graph needs n_vars >= 1 and tau_max >= 0");
    }
    marks_.assign(static_cast<std::size_t>(tau_max + 1) * n_vars * n_vars, LinkType::Absent);
}

void TimeSeriesGraph::check(int i, int tau, int j) const {
    if (i < 0 || j < 0 || i >= n_vars_ || j >= n_vars_ || tau < 0 || tau > tau_max_) {
        throw OutOfRange("pair (" + std::to_string(i) + ", " + std::to_string(tau) + ", " +
                         std::to_string(j) + ") outside graph of N=" + std::to_string(n_vars_) +
                         ", tau_max=" + std::to_string(tau_max_));
    }
    if (tau == 0 && i == j) {
        throw OutOfRange("contemporaneous self-pair (" + std::to_string(i) + ", 0, " +
                         std::to_string(i) + ")");
    }
}

std::size_t TimeSeriesGraph::slot(int i, int tau, int j) const {
    return (static_cast<std::size_t>(tau) * n_vars_ + i) * n_vars_ + j;
}

LinkType TimeSeriesGraph::get(int i, int tau, int j) const {
    check(i, tau, j);
    if (tau == 0 && i > j) return mirror(marks_[slot(j, 0, i)]);
    return marks_[slot(i, tau, j)];
}

void TimeSeriesGraph::set(int i, int tau, int j, LinkType m) {
    check(i, tau, j);
    if (tau > 0 && m != LinkType::Absent && m != LinkType::DirectedTo) {
        throw InvalidMark("lagged pair (" + std::to_string(i) + ", " + std::to_string(tau) + ", " +
                          std::to_string(j) + ") cannot take mark " + std::string(to_token(m)));
    }
    if (tau == 0 && i > j) {
        marks_[slot(j, 0, i)] = mirror(m);
    } else {
        marks_[slot(i, tau, j)] = m;
    }
}

std::size_t TimeSeriesGraph::pair_count() const {
    const auto n = static_cast<std::size_t>(n_vars_);
    return n * (n - 1) / 2 + static_cast<std::size_t>(tau_max_) * n * n;
}

std::size_t TimeSeriesGraph::dense_index(const PairKey& k) const {
    const auto n = static_cast<std::size_t>(n_vars_);
    if (k.lag == 0) {
        // Row-major upper triangle without the diagonal.
        const auto i = static_cast<std::size_t>(k.source);
        const auto j = static_cast<std::size_t>(k.target);
        return i * n - i * (i + 1) / 2 + (j - i - 1);
    }
    return n * (n - 1) / 2 + (static_cast<std::size_t>(k.lag - 1) * n + k.source) * n + k.target;
}

std::vector<PairKey> TimeSeriesGraph::pair_keys() const {
    std::vector<PairKey> keys;
    keys.reserve(pair_count());
    for (int tau = 0; tau <= tau_max_; ++tau) {
        for (int i = 0; i < n_vars_; ++i) {
            for (int j = (tau == 0 ? i + 1 : 0); j < n_vars_; ++j) keys.push_back({i, tau, j});
        }
    }
    return keys;
}

PairKey canonical(const PairKey& k, bool* flipped) {
    const bool flip = k.lag == 0 && k.source > k.target;
    if (flipped) *flipped = flip;
    return flip ? PairKey{k.target, 0, k.source} : k;
}

std::vector<PairKey> adjacency_set(const TimeSeriesGraph& g, int j) {
    if (j < 0 || j >= g.n_vars()) throw OutOfRange("variable index out of range");
    std::vector<PairKey> out;
    for (int tau = 0; tau <= g.tau_max(); ++tau) {
        for (int i = 0; i < g.n_vars(); ++i) {
            if (tau == 0 && i == j) continue;
            if (g.get(i, tau, j) != LinkType::Absent) out.push_back({i, tau, j});
        }
    }
    return out;
}

namespace {
void require_same_shape(const TimeSeriesGraph& a, const TimeSeriesGraph& b) {
    if (!a.same_shape(b)) {
        throw ShapeMismatch("graphs differ in shape: (" + std::to_string(a.n_vars()) + ", " +
                            std::to_string(a.tau_max()) + ") vs (" + std::to_string(b.n_vars()) +
                            ", " + std::to_string(b.tau_max()) + ")");
    }
}
}  // namespace

bool graphs_equal(const TimeSeriesGraph& a, const TimeSeriesGraph& b) {
    require_same_shape(a, b);
    return a == b;
}

std::vector<MarkDiff> diff(const TimeSeriesGraph& a, const TimeSeriesGraph& b) {
    require_same_shape(a, b);
    std::vector<MarkDiff> out;
    for (const PairKey& k : a.pair_keys()) {
        const LinkType ma = a.get(k);
        const LinkType mb = b.get(k);
        if (ma != mb) out.push_back({k, ma, mb});
    }
    return out;
}

bool has_contemporaneous_cycle(const TimeSeriesGraph& g) {
    const int n = g.n_vars();
    // Kahn's algorithm on the directed lag-0 edges.
    std::vector<int> indegree(n, 0);
    std::vector<std::vector<int>> children(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j && g.get(i, 0, j) == LinkType::DirectedTo) {
                children[i].push_back(j);
                ++indegree[j];
            }
        }
    }
    std::vector<int> ready;
    for (int v = 0; v < n; ++v) {
        if (indegree[v] == 0) ready.push_back(v);
    }
    int seen = 0;
    while (!ready.empty()) {
        const int v = ready.back();
        ready.pop_back();
        ++seen;
        for (int c : children[v]) {
            if (--indegree[c] == 0) ready.push_back(c);
        }
    }
    return seen != n;
}

std::string serialize(const TimeSeriesGraph& g) {
    std::string out = std::to_string(g.n_vars()) + " " + std::to_string(g.tau_max()) + "\n";
    for (const PairKey& k : g.pair_keys()) {
        const LinkType m = g.get(k);
        if (m == LinkType::Absent) continue;
        out += std::to_string(k.source) + " " + std::to_string(k.lag) + " " +
               std::to_string(k.target) + " " + std::string(to_token(m)) + "\n";
    }
    return out;
}

namespace {
int parse_int(std::string_view tok, int line) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError("graph line " + std::to_string(line) + ": expected integer, got '" +
                         std::string(tok) + "'");
    }
    return v;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t p = 0;
    while (p < s.size()) {
        while (p < s.size() && (s[p] == ' ' || s[p] == '\t' || s[p] == '\r')) ++p;
        std::size_t q = p;
        while (q < s.size() && s[q] != ' ' && s[q] != '\t' && s[q] != '\r') ++q;
        if (q > p) out.push_back(s.substr(p, q - p));
        p = q;
    }
    return out;
}
}  // namespace

TimeSeriesGraph parse_graph(std::string_view text) {
    std::optional<TimeSeriesGraph> g;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        const std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        const auto tok = split_ws(line);
        if (tok.empty()) continue;
        if (!g) {
            if (tok.size() != 2) throw ParseError("graph header must be 'N tau_max'");
            g.emplace(parse_int(tok[0], line_no), parse_int(tok[1], line_no));
            continue;
        }
        if (tok.size() != 4) {
            throw ParseError("graph line " + std::to_string(line_no) + ": expected 'i tau j MARK'");
        }
        const auto mark = link_type_from_token(tok[3]);
        if (!mark) {
            throw ParseError("graph line " + std::to_string(line_no) + ": unknown mark '" +
                             std::string(tok[3]) + "'");
        }
        try {
            g->set(parse_int(tok[0], line_no), parse_int(tok[1], line_no),
                   parse_int(tok[2], line_no), *mark);
        } catch (const OutOfRange& e) {
            throw ParseError("graph line " + std::to_string(line_no) + ": " + e.what());
        } catch (const InvalidMark& e) {
            throw ParseError("graph line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!g) throw ParseError("empty graph file");
    return *std::move(g);
}

void write_graph_file(const TimeSeriesGraph& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << serialize(g);
}

TimeSeriesGraph read_graph_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_graph(ss.str());
}

}  // namespace tsbag
