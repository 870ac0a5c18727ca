#include "tsbag/errors.hpp"
#include "tsbag/pcmci.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tsbag {

void DiscoveryConfig::validate() const {
    if (!(alpha_pc > 0.0 && alpha_pc < 1.0)) throw ConfigError("alpha_pc must lie in (0, 1)");
    if (tau_max < 1) throw ConfigError("tau_max must be >= 1");
    for (const auto* cap : {&pc1_max_conds, &max_contemp_conds, &max_conds_px, &max_conds_dim}) {
        if (*cap && **cap < 0) throw ConfigError("conditioning caps must be >= 0");
    }
}

std::vector<Variable> LaggedParentSets::parents(int j) const {
    std::vector<Variable> out;
    out.reserve(per_target.at(j).size());
    for (const auto& c : per_target[j]) out.push_back(c.var);
    return out;
}

void SepSetStore::record(const PairKey& key, std::vector<Variable> set, double p_value) {
    const PairKey k = canonical(key);
    auto it = sets_.find(k);
    if (it == sets_.end()) {
        sets_.emplace(k, Entry{std::move(set), p_value});
    } else if (p_value > it->second.p_value) {
        it->second = Entry{std::move(set), p_value};
    }
}

const std::vector<Variable>* SepSetStore::find(const PairKey& key) const {
    auto it = sets_.find(canonical(key));
    return it == sets_.end() ? nullptr : &it->second.set;
}

bool SepSetStore::contains(const PairKey& key, Variable v) const {
    const auto* s = find(key);
    return s && std::find(s->begin(), s->end(), v) != s->end();
}

void SepSetStore::merge(const SepSetStore& other) {
    for (const auto& [k, e] : other.sets_) record(k, e.set, e.p_value);
}

namespace {

// Visits every size-q subset of pool (as index combinations in lexicographic
// order) until fn returns true. Returns whether fn stopped the walk.
template <class Fn>
bool for_each_subset(std::size_t pool, std::size_t q, Fn&& fn) {
    if (q > pool) return false;
    std::vector<std::size_t> idx(q);
    for (std::size_t k = 0; k < q; ++k) idx[k] = k;
    while (true) {
        if (fn(std::span<const std::size_t>(idx))) return true;
        if (q == 0) return false;
        std::size_t k = q;
        while (k > 0 && idx[k - 1] == pool - q + (k - 1)) --k;
        if (k == 0) return false;
        ++idx[k - 1];
        for (std::size_t r = k; r < q; ++r) idx[r] = idx[r - 1] + 1;
    }
}

void sort_by_strength(std::vector<ParentCandidate>& c) {
    std::stable_sort(c.begin(), c.end(), [](const ParentCandidate& a, const ParentCandidate& b) {
        if (a.strength != b.strength) return a.strength > b.strength;
        return a.var < b.var;
    });
}

void dedupe(std::vector<Variable>& z) {
    std::sort(z.begin(), z.end());
    z.erase(std::unique(z.begin(), z.end()), z.end());
}

constexpr double kUntested = std::numeric_limits<double>::infinity();

}  // namespace

LaggedParentSets pc1_lagged_phase(const CITest& test, int n_vars, const DiscoveryConfig& cfg,
                                  SepSetStore* sepsets) {
    cfg.validate();
    LaggedParentSets out;
    out.per_target.resize(n_vars);
    for (int j = 0; j < n_vars; ++j) {
        auto& cands = out.per_target[j];
        for (int tau = 1; tau <= cfg.tau_max; ++tau) {
            for (int i = 0; i < n_vars; ++i) cands.push_back({Variable{i, tau}, kUntested});
        }
        const Variable y{j, 0};
        std::vector<Variable> z;
        for (std::size_t k = 0;; ++k) {
            if (cands.size() <= k) break;
            if (cfg.pc1_max_conds && k > static_cast<std::size_t>(*cfg.pc1_max_conds)) break;
            // S_k is taken from the ordering at the start of the sweep; removals
            // are committed once the sweep is over.
            const std::vector<ParentCandidate> snapshot = cands;
            std::vector<char> remove(snapshot.size(), 0);
            for (std::size_t c = 0; c < snapshot.size(); ++c) {
                z.clear();
                for (std::size_t o = 0; o < snapshot.size() && z.size() < k; ++o) {
                    if (o != c) z.push_back(snapshot[o].var);
                }
                const CITestResult r = test.test(snapshot[c].var, y, z);
                cands[c].strength = std::abs(r.statistic);
                if (r.p_value > cfg.alpha_pc) {
                    remove[c] = 1;
                    if (sepsets) sepsets->record(PairKey{snapshot[c].var.var, snapshot[c].var.lag, j}, z, r.p_value);
                }
            }
            std::vector<ParentCandidate> kept;
            for (std::size_t c = 0; c < cands.size(); ++c) {
                if (!remove[c]) kept.push_back(cands[c]);
            }
            cands = std::move(kept);
            sort_by_strength(cands);
        }
    }
    return out;
}

LaggedParentSets pc1_lagged_phase(const TimeSeriesDataset& data, const DiscoveryConfig& cfg,
                                  std::span<const std::size_t> index_set) {
    const auto test = make_ci_test(cfg.ci_test, data, cfg.tau_max, index_set);
    return pc1_lagged_phase(*test, static_cast<int>(data.n_vars()), cfg);
}

namespace {

struct Removal {
    PairKey key;
    std::vector<Variable> sepset;
    double p_value;
};

// Adjacency bookkeeping shared by the MCI and PC skeleton searches.
class Adjacency {
public:
    Adjacency(int n_vars, int tau_max)
        : n_(n_vars), tau_max_(tau_max),
          present_(static_cast<std::size_t>(tau_max + 1) * n_vars * n_vars, 0),
          strength_(present_.size(), kUntested) {}

    std::size_t slot(int i, int tau, int j) const {
        if (tau == 0 && i > j) std::swap(i, j);
        return (static_cast<std::size_t>(tau) * n_ + i) * n_ + j;
    }
    bool has(int i, int tau, int j) const { return present_[slot(i, tau, j)] != 0; }
    void set(int i, int tau, int j, bool v) { present_[slot(i, tau, j)] = v ? 1 : 0; }
    double strength(int i, int tau, int j) const { return strength_[slot(i, tau, j)]; }
    void set_strength(int i, int tau, int j, double s) { strength_[slot(i, tau, j)] = s; }

    /// Non-future adjacencies of X^j_t, lagged only or all.
    std::vector<ParentCandidate> of(int j, bool contemporaneous, bool lagged) const {
        std::vector<ParentCandidate> out;
        for (int tau = contemporaneous ? 0 : 1; tau <= (lagged ? tau_max_ : 0); ++tau) {
            for (int i = 0; i < n_; ++i) {
                if (tau == 0 && i == j) continue;
                if (has(i, tau, j)) out.push_back({Variable{i, tau}, strength(i, tau, j)});
            }
        }
        return out;
    }

    TimeSeriesGraph to_skeleton() const {
        TimeSeriesGraph g(n_, tau_max_);
        for (const PairKey& k : g.pair_keys()) {
            if (has(k.source, k.lag, k.target)) {
                g.set(k, k.lag == 0 ? LinkType::Unoriented : LinkType::DirectedTo);
            }
        }
        return g;
    }

private:
    int n_;
    int tau_max_;
    std::vector<char> present_;
    std::vector<double> strength_;
};

// Per-level minimum |statistic| for each pair, committed after the level.
class LevelStrength {
public:
    explicit LevelStrength(const Adjacency& adj, int n_vars, int tau_max)
        : adj_(adj), n_(n_vars), min_(static_cast<std::size_t>(tau_max + 1) * n_vars * n_vars,
                                      kUntested) {}

    void observe(int i, int tau, int j, double s) {
        double& m = min_[adj_.slot(i, tau, j)];
        m = std::min(m, s);
    }
    void commit(Adjacency& adj, int tau_max) const {
        for (int tau = 0; tau <= tau_max; ++tau) {
            for (int i = 0; i < n_; ++i) {
                for (int j = 0; j < n_; ++j) {
                    if (tau == 0 && i >= j) continue;
                    const double m = min_[adj.slot(i, tau, j)];
                    if (m != kUntested) adj.set_strength(i, tau, j, m);
                }
            }
        }
    }

private:
    const Adjacency& adj_;
    int n_;
    std::vector<double> min_;
};

void apply_removals(Adjacency& adj, std::vector<Removal>& removals, SepSetStore& sepsets) {
    for (auto& r : removals) {
        adj.set(r.key.source, r.key.lag, r.key.target, false);
        sepsets.record(r.key, std::move(r.sepset), r.p_value);
    }
    removals.clear();
}

}  // namespace

std::pair<TimeSeriesGraph, SepSetStore> mci_skeleton_phase(const CITest& test, int n_vars,
                                                           const DiscoveryConfig& cfg,
                                                           const LaggedParentSets& parents) {
    cfg.validate();
    if (static_cast<int>(parents.per_target.size()) != n_vars) {
        throw ShapeMismatch("lagged parent sets do not match the number of variables");
    }
    Adjacency adj(n_vars, cfg.tau_max);
    for (int j = 0; j < n_vars; ++j) {
        for (int i = 0; i < n_vars; ++i) {
            if (i != j) adj.set(i, 0, j, true);
        }
        for (const auto& c : parents.per_target[j]) {
            if (c.var.lag < 1 || c.var.lag > cfg.tau_max) {
                throw OutOfRange("lagged parent outside 1..tau_max");
            }
            adj.set(c.var.var, c.var.lag, j, true);
            adj.set_strength(c.var.var, c.var.lag, j, c.strength);
        }
    }

    // Lagged parents of X^i_t, strongest first, capped for the shifted copy.
    std::vector<std::vector<Variable>> px(n_vars);
    for (int i = 0; i < n_vars; ++i) {
        px[i] = parents.parents(i);
        if (cfg.max_conds_px && px[i].size() > static_cast<std::size_t>(*cfg.max_conds_px)) {
            px[i].resize(static_cast<std::size_t>(*cfg.max_conds_px));
        }
    }

    SepSetStore sepsets;
    std::vector<Removal> removals;
    std::vector<Variable> z;
    for (std::size_t q = 0;; ++q) {
        if (cfg.max_contemp_conds && q > static_cast<std::size_t>(*cfg.max_contemp_conds)) break;
        bool any_tested = false;
        LevelStrength level(adj, n_vars, cfg.tau_max);
        for (int j = 0; j < n_vars; ++j) {
            std::vector<ParentCandidate> contemp = adj.of(j, true, false);
            sort_by_strength(contemp);
            const std::vector<ParentCandidate> pairs = adj.of(j, true, true);
            const Variable y{j, 0};
            for (const auto& pc : pairs) {
                const Variable x = pc.var;
                std::vector<Variable> pool;
                for (const auto& c : contemp) {
                    if (!(x.lag == 0 && c.var.var == x.var)) pool.push_back(c.var);
                }
                if (pool.size() < q) continue;
                any_tested = true;
                for_each_subset(pool.size(), q, [&](std::span<const std::size_t> pick) {
                    z.clear();
                    for (std::size_t p : pick) z.push_back(pool[p]);
                    for (const auto& c : parents.per_target[j]) {
                        if (c.var != x) z.push_back(c.var);
                    }
                    for (Variable v : px[x.var]) z.push_back(Variable{v.var, v.lag + x.lag});
                    dedupe(z);
                    const CITestResult r = test.test(x, y, z);
                    level.observe(x.var, x.lag, j, std::abs(r.statistic));
                    if (r.p_value > cfg.alpha_pc) {
                        removals.push_back({PairKey{x.var, x.lag, j}, z, r.p_value});
                        return true;
                    }
                    return false;
                });
            }
        }
        level.commit(adj, cfg.tau_max);
        apply_removals(adj, removals, sepsets);
        if (!any_tested) break;
    }
    return {adj.to_skeleton(), std::move(sepsets)};
}

std::pair<TimeSeriesGraph, SepSetStore> mci_skeleton_phase(const TimeSeriesDataset& data,
                                                           const DiscoveryConfig& cfg,
                                                           const LaggedParentSets& parents,
                                                           std::span<const std::size_t> index_set) {
    const auto test = make_ci_test(cfg.ci_test, data, cfg.tau_max, index_set);
    return mci_skeleton_phase(*test, static_cast<int>(data.n_vars()), cfg, parents);
}

std::pair<TimeSeriesGraph, SepSetStore> pc_skeleton_phase(const CITest& test, int n_vars,
                                                          const DiscoveryConfig& cfg) {
    cfg.validate();
    Adjacency adj(n_vars, cfg.tau_max);
    for (int tau = 0; tau <= cfg.tau_max; ++tau) {
        for (int i = 0; i < n_vars; ++i) {
            for (int j = 0; j < n_vars; ++j) {
                if (!(tau == 0 && i == j)) adj.set(i, tau, j, true);
            }
        }
    }
    SepSetStore sepsets;
    std::vector<Removal> removals;
    std::vector<Variable> z;
    for (std::size_t q = 0;; ++q) {
        if (cfg.max_conds_dim && q > static_cast<std::size_t>(*cfg.max_conds_dim)) break;
        bool any_tested = false;
        LevelStrength level(adj, n_vars, cfg.tau_max);
        for (int j = 0; j < n_vars; ++j) {
            std::vector<ParentCandidate> all = adj.of(j, true, true);
            const std::vector<ParentCandidate> pairs = all;
            sort_by_strength(all);
            const Variable y{j, 0};
            for (const auto& pc : pairs) {
                const Variable x = pc.var;
                std::vector<Variable> pool;
                for (const auto& c : all) {
                    if (c.var != x) pool.push_back(c.var);
                }
                if (pool.size() < q) continue;
                any_tested = true;
                for_each_subset(pool.size(), q, [&](std::span<const std::size_t> pick) {
                    z.clear();
                    for (std::size_t p : pick) z.push_back(pool[p]);
                    dedupe(z);
                    const CITestResult r = test.test(x, y, z);
                    level.observe(x.var, x.lag, j, std::abs(r.statistic));
                    if (r.p_value > cfg.alpha_pc) {
                        removals.push_back({PairKey{x.var, x.lag, j}, z, r.p_value});
                        return true;
                    }
                    return false;
                });
            }
        }
        level.commit(adj, cfg.tau_max);
        apply_removals(adj, removals, sepsets);
        if (!any_tested) break;
    }
    return {adj.to_skeleton(), std::move(sepsets)};
}

TimeSeriesGraph run_pcmciplus(const CITest& test, int n_vars, const DiscoveryConfig& cfg) {
    SepSetStore sepsets;
    const LaggedParentSets parents = pc1_lagged_phase(test, n_vars, cfg, &sepsets);
    auto [skeleton, mci_sepsets] = mci_skeleton_phase(test, n_vars, cfg, parents);
    sepsets.merge(mci_sepsets);
    return apply_meek_rules(orient_colliders(skeleton, sepsets));
}

TimeSeriesGraph run_pcmciplus(const TimeSeriesDataset& data, const DiscoveryConfig& cfg,
                              std::span<const std::size_t> index_set) {
    cfg.validate();
    const auto test = make_ci_test(cfg.ci_test, data, cfg.tau_max, index_set);
    return run_pcmciplus(*test, static_cast<int>(data.n_vars()), cfg);
}

TimeSeriesGraph run_pc_timeseries(const CITest& test, int n_vars, const DiscoveryConfig& cfg) {
    auto [skeleton, sepsets] = pc_skeleton_phase(test, n_vars, cfg);
    return apply_meek_rules(orient_colliders(skeleton, sepsets));
}

TimeSeriesGraph run_pc_timeseries(const TimeSeriesDataset& data, const DiscoveryConfig& cfg,
                                  std::span<const std::size_t> index_set) {
    cfg.validate();
    const auto test = make_ci_test(cfg.ci_test, data, cfg.tau_max, index_set);
    return run_pc_timeseries(*test, static_cast<int>(data.n_vars()), cfg);
}

TimeSeriesGraph run_algorithm(Algorithm algo, const TimeSeriesDataset& data,
                              const DiscoveryConfig& cfg, std::span<const std::size_t> index_set) {
    return algo == Algorithm::PCMCIPlus ? run_pcmciplus(data, cfg, index_set)
                                        : run_pc_timeseries(data, cfg, index_set);
}

}  // namespace tsbag
