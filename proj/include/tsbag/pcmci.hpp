#pragma once

#include "tsbag/ci_tests.hpp"
#include "tsbag/dataset.hpp"
#include "tsbag/graph.hpp"

#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace tsbag {

struct DiscoveryConfig {
    double alpha_pc = 0.01;
    int tau_max = 1;
    /// Cap on |S_k| in the lagged PC1 phase.
    std::optional<int> pc1_max_conds;
    /// Cap on the contemporaneous subset size in the MCI phase.
    std::optional<int> max_contemp_conds;
    /// Use only the strongest max_conds_px lagged parents of X^i_{t-tau} in MCI tests.
    std::optional<int> max_conds_px;
    /// Cap on the conditioning-set size of the time-series PC skeleton.
    std::optional<int> max_conds_dim;
    CITestSpec ci_test;

    void validate() const;
};

enum class Algorithm { PCMCIPlus, PCTimeSeries };

struct ParentCandidate {
    Variable var;
    double strength = 0.0;  // |statistic| of the latest test
};

/// Estimated lagged parents of each X^j_t, strongest association first.
struct LaggedParentSets {
    std::vector<std::vector<ParentCandidate>> per_target;

    std::vector<Variable> parents(int j) const;
};

/// Conditioning sets that removed an adjacency, keyed by canonical PairKey.
/// Variables are lags relative to the target's time step.
class SepSetStore {
public:
    /// Keeps the set with the larger p-value if the pair is recorded twice.
    void record(const PairKey& key, std::vector<Variable> set, double p_value);
    const std::vector<Variable>* find(const PairKey& key) const;
    bool contains(const PairKey& key, Variable v) const;
    void merge(const SepSetStore& other);
    std::size_t size() const { return sets_.size(); }

private:
    struct Entry {
        std::vector<Variable> set;
        double p_value;
    };
    std::map<PairKey, Entry> sets_;
};

/// Lagged skeleton phase: removes lagged pairs conditioning on the k
/// strongest remaining candidates for k = 0, 1, 2, ...
LaggedParentSets pc1_lagged_phase(const CITest& test, int n_vars, const DiscoveryConfig& cfg,
                                  SepSetStore* sepsets = nullptr);
LaggedParentSets pc1_lagged_phase(const TimeSeriesDataset& data, const DiscoveryConfig& cfg,
                                  std::span<const std::size_t> index_set = {});

/// MCI skeleton phase over contemporaneous conditioning subsets. Returns the
/// skeleton (lagged pairs -->, contemporaneous pairs o-o) and the sepsets of
/// pairs removed here.
std::pair<TimeSeriesGraph, SepSetStore> mci_skeleton_phase(const CITest& test, int n_vars,
                                                           const DiscoveryConfig& cfg,
                                                           const LaggedParentSets& parents);
std::pair<TimeSeriesGraph, SepSetStore> mci_skeleton_phase(const TimeSeriesDataset& data,
                                                           const DiscoveryConfig& cfg,
                                                           const LaggedParentSets& parents,
                                                           std::span<const std::size_t> index_set = {});

/// PC-stable skeleton over all pairs with conditioning sets drawn from every
/// non-future adjacency of the target.
std::pair<TimeSeriesGraph, SepSetStore> pc_skeleton_phase(const CITest& test, int n_vars,
                                                          const DiscoveryConfig& cfg);

/// Orients unshielded colliders with at least one contemporaneous edge.
/// Demands are collected first and applied together; opposite demands on
/// one edge produce a conflict mark.
TimeSeriesGraph orient_colliders(const TimeSeriesGraph& skeleton, const SepSetStore& sepsets);

/// Meek rules R1-R4 on contemporaneous o-o edges, applied in batch sweeps to
/// a fixpoint. Lagged edges act as directed inputs.
TimeSeriesGraph apply_meek_rules(const TimeSeriesGraph& g);

TimeSeriesGraph run_pcmciplus(const CITest& test, int n_vars, const DiscoveryConfig& cfg);
TimeSeriesGraph run_pcmciplus(const TimeSeriesDataset& data, const DiscoveryConfig& cfg,
                              std::span<const std::size_t> index_set = {});

TimeSeriesGraph run_pc_timeseries(const CITest& test, int n_vars, const DiscoveryConfig& cfg);
TimeSeriesGraph run_pc_timeseries(const TimeSeriesDataset& data, const DiscoveryConfig& cfg,
                                  std::span<const std::size_t> index_set = {});

TimeSeriesGraph run_algorithm(Algorithm algo, const TimeSeriesDataset& data,
                              const DiscoveryConfig& cfg,
                              std::span<const std::size_t> index_set = {});

}  // namespace tsbag
