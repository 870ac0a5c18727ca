#pragma once

#include "tsbag/dataset.hpp"
#include "tsbag/graph.hpp"
#include "tsbag/pcmci.hpp"
#include "tsbag/rng.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tsbag {

enum class Aggregation { Majority, TwoStage };

struct BootstrapConfig {
    int B = 25;
    std::uint64_t seed = 0;
    Aggregation aggregation = Aggregation::Majority;

    void validate() const;
};

/// Per canonical pair, how often each LinkType occurred among B graphs.
class FrequencyTable {
public:
    FrequencyTable() = default;
    FrequencyTable(int n_vars, int tau_max, int B);

    int n_vars() const { return n_vars_; }
    int tau_max() const { return tau_max_; }
    int replicas() const { return B_; }

    /// Counts the mark of every pair of g; contemporaneous pairs in canonical orientation.
    void add(const TimeSeriesGraph& g);

    int count(const PairKey& key, LinkType m) const;
    /// count / B. Non-canonical lag-0 keys are mirrored.
    double freq(const PairKey& key, LinkType m) const;
    std::array<int, kLinkTypeCount> counts(const PairKey& canonical_key) const;

    std::vector<PairKey> pair_keys() const { return shape_.pair_keys(); }

private:
    int n_vars_ = 0;
    int tau_max_ = 0;
    int B_ = 0;
    TimeSeriesGraph shape_;
    std::vector<std::array<int, kLinkTypeCount>> counts_;
};

struct BootstrapEnsemble {
    std::vector<TimeSeriesGraph> graphs;
    FrequencyTable freq;
    TimeSeriesGraph bagged;
    /// Frequency of the bagged mark, indexed like bagged.pair_keys().
    std::vector<double> confidence;
    bool has_contemporaneous_cycle = false;

    double confidence_of(const PairKey& key) const;
};

/// |I_S| indices drawn uniformly with replacement from {2 tau_max, ..., T-1}.
std::vector<std::size_t> draw_bootstrap_indices(std::size_t length, int tau_max, Rng& rng);

/// Majority mark over the counts with the tie order
/// Absent > Conflict > Unoriented > directed; a tie between only --> and <--
/// yields Conflict.
LinkType majority_mark(const std::array<int, kLinkTypeCount>& counts);
/// Absent iff count(Absent) > B/2, else the majority among present marks.
LinkType two_stage_mark(const std::array<int, kLinkTypeCount>& counts);

struct Aggregate {
    TimeSeriesGraph graph;
    FrequencyTable freq;
};

Aggregate aggregate_majority(std::span<const TimeSeriesGraph> graphs);
Aggregate aggregate_two_stage(std::span<const TimeSeriesGraph> graphs);

/// Bagged run: B replicas, each with its own resampled index multiset used
/// for every CI test of the base algorithm. Deterministic for any worker count.
BootstrapEnsemble run_bagged(const TimeSeriesDataset& data, Algorithm algo,
                             const DiscoveryConfig& disc_cfg, const BootstrapConfig& boot_cfg,
                             int workers = 1);

/// Ensemble built from already computed replica graphs.
BootstrapEnsemble make_ensemble(std::vector<TimeSeriesGraph> graphs, Aggregation aggregation);

/// CSV with columns i,tau,j,mark,freq; one row per canonical pair and observed mark.
std::string frequency_csv(const FrequencyTable& freq);
/// CSV with columns i,tau,j,mark,confidence for every non-Absent bagged pair.
std::string confidence_csv(const BootstrapEnsemble& ens);

}  // namespace tsbag
