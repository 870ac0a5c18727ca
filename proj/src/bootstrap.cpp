#include "tsbag/bootstrap.hpp"

#include "tsbag/errors.hpp"
#include "tsbag/parallel.hpp"

#include <sstream>

namespace tsbag {

void BootstrapConfig::validate() const {
    if (B < 1) throw ConfigError("bootstrap: B must be >= 1");
}

FrequencyTable::FrequencyTable(int n_vars, int tau_max, int B)
    : n_vars_(n_vars), tau_max_(tau_max), B_(B), shape_(n_vars, tau_max) {
    counts_.assign(shape_.pair_count(), {});
}

void FrequencyTable::add(const TimeSeriesGraph& g) {
    if (!g.same_shape(shape_)) throw ShapeMismatch("frequency table: graph shape differs");
    std::size_t idx = 0;
    for (const PairKey& k : shape_.pair_keys()) ++counts_[idx++][index_of(g.get(k))];
}

std::array<int, kLinkTypeCount> FrequencyTable::counts(const PairKey& canonical_key) const {
    return counts_[shape_.dense_index(canonical_key)];
}

int FrequencyTable::count(const PairKey& key, LinkType m) const {
    bool flipped = false;
    const PairKey c = canonical(key, &flipped);
    return counts(c)[index_of(flipped ? mirror(m) : m)];
}

double FrequencyTable::freq(const PairKey& key, LinkType m) const {
    return static_cast<double>(count(key, m)) / B_;
}

double BootstrapEnsemble::confidence_of(const PairKey& key) const {
    return confidence[bagged.dense_index(canonical(key))];
}

std::vector<std::size_t> draw_bootstrap_indices(std::size_t length, int tau_max, Rng& rng) {
    const auto window = default_index_set(length, tau_max);
    std::uniform_int_distribution<std::size_t> pick(0, window.size() - 1);
    std::vector<std::size_t> out(window.size());
    for (auto& s : out) s = window[pick(rng)];
    return out;
}

namespace {

// Preference among equally frequent marks, best first.
constexpr std::array<LinkType, 3> kPreferred{LinkType::Absent, LinkType::Conflict,
                                             LinkType::Unoriented};

LinkType vote(const std::array<int, kLinkTypeCount>& c, bool include_absent) {
    int best = -1;
    for (LinkType m : kAllLinkTypes) {
        if (m == LinkType::Absent && !include_absent) continue;
        best = std::max(best, c[index_of(m)]);
    }
    for (LinkType m : kPreferred) {
        if (m == LinkType::Absent && !include_absent) continue;
        if (c[index_of(m)] == best) return m;
    }
    const bool to = c[index_of(LinkType::DirectedTo)] == best;
    const bool from = c[index_of(LinkType::DirectedFrom)] == best;
    if (to && from) return LinkType::Conflict;
    return to ? LinkType::DirectedTo : LinkType::DirectedFrom;
}

Aggregate aggregate(std::span<const TimeSeriesGraph> graphs, Aggregation mode) {
    if (graphs.empty()) throw EmptyEnsemble("aggregate: no graphs");
    const TimeSeriesGraph& first = graphs.front();
    Aggregate out{TimeSeriesGraph(first.n_vars(), first.tau_max()),
                  FrequencyTable(first.n_vars(), first.tau_max(), static_cast<int>(graphs.size()))};
    for (const auto& g : graphs) out.freq.add(g);
    for (const PairKey& k : out.graph.pair_keys()) {
        const auto c = out.freq.counts(k);
        out.graph.set(k, mode == Aggregation::Majority ? majority_mark(c) : two_stage_mark(c));
    }
    return out;
}

}  // namespace

LinkType majority_mark(const std::array<int, kLinkTypeCount>& counts) {
    return vote(counts, true);
}

LinkType two_stage_mark(const std::array<int, kLinkTypeCount>& counts) {
    int total = 0;
    for (int c : counts) total += c;
    if (2 * counts[index_of(LinkType::Absent)] > total) return LinkType::Absent;
    return vote(counts, false);
}

Aggregate aggregate_majority(std::span<const TimeSeriesGraph> graphs) {
    return aggregate(graphs, Aggregation::Majority);
}

Aggregate aggregate_two_stage(std::span<const TimeSeriesGraph> graphs) {
    return aggregate(graphs, Aggregation::TwoStage);
}

BootstrapEnsemble make_ensemble(std::vector<TimeSeriesGraph> graphs, Aggregation aggregation) {
    Aggregate agg = aggregate(graphs, aggregation);
    BootstrapEnsemble ens;
    ens.graphs = std::move(graphs);
    ens.freq = std::move(agg.freq);
    ens.bagged = std::move(agg.graph);
    for (const PairKey& k : ens.bagged.pair_keys()) {
        ens.confidence.push_back(ens.freq.freq(k, ens.bagged.get(k)));
    }
    ens.has_contemporaneous_cycle = has_contemporaneous_cycle(ens.bagged);
    return ens;
}

BootstrapEnsemble run_bagged(const TimeSeriesDataset& data, Algorithm algo,
                             const DiscoveryConfig& disc_cfg, const BootstrapConfig& boot_cfg,
                             int workers) {
    boot_cfg.validate();
    disc_cfg.validate();
    default_index_set(data.length(), disc_cfg.tau_max);  // DegenerateWindow before any work
    std::vector<TimeSeriesGraph> graphs(static_cast<std::size_t>(boot_cfg.B));
    parallel_for(graphs.size(), workers, [&](std::size_t b) {
        Rng rng = make_rng(boot_cfg.seed, {b});
        const auto idx = draw_bootstrap_indices(data.length(), disc_cfg.tau_max, rng);
        graphs[b] = run_algorithm(algo, data, disc_cfg, idx);
    });
    return make_ensemble(std::move(graphs), boot_cfg.aggregation);
}

std::string frequency_csv(const FrequencyTable& freq) {
    std::ostringstream os;
    os << "i,tau,j,mark,freq\n";
    for (const PairKey& k : freq.pair_keys()) {
        for (LinkType m : kAllLinkTypes) {
            const int c = freq.count(k, m);
            if (c == 0) continue;
            os << k.source << ',' << k.lag << ',' << k.target << ',' << to_token(m) << ','
               << format_double(static_cast<double>(c) / freq.replicas()) << '\n';
        }
    }
    return os.str();
}

std::string confidence_csv(const BootstrapEnsemble& ens) {
    std::ostringstream os;
    os << "i,tau,j,mark,confidence\n";
    std::size_t idx = 0;
    for (const PairKey& k : ens.bagged.pair_keys()) {
        const LinkType m = ens.bagged.get(k);
        const double c = ens.confidence[idx++];
        if (m == LinkType::Absent) continue;
        os << k.source << ',' << k.lag << ',' << k.target << ',' << to_token(m) << ','
           << format_double(c) << '\n';
    }
    return os.str();
}

}  // namespace tsbag
