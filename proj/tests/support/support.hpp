#pragma once

#include "tsbag/graph.hpp"
#include "tsbag/rng.hpp"
#include "tsbag/scm.hpp"

#include <span>
#include <vector>

namespace tsbag::support {

/// Expected oracle output for a fully directed truth: lagged links as in the
/// truth, a contemporaneous edge directed iff every acyclic re-orientation of
/// the contemporaneous edges with the same unshielded colliders agrees on it,
/// o-o otherwise. Found by enumerating all 2^E orientations.
TimeSeriesGraph brute_force_pattern(const TimeSeriesGraph& truth);

/// Asymptotic Kolmogorov p-value of the one-sample KS test against U(0,1).
double ks_uniform_pvalue(std::vector<double> sample);

/// Random graph with arbitrary marks (lagged: Absent or -->).
TimeSeriesGraph random_graph(int n_vars, int tau_max, double density, Rng& rng);

/// Maps a graph estimated on dataset.permuted_columns(perm) back to the
/// original variable indices.
TimeSeriesGraph unpermute(const TimeSeriesGraph& g, std::span<const int> perm);

/// Random stationary model and its truth at tau_max.
struct ModelDraw {
    StructuralCausalModel scm;
    TimeSeriesGraph truth;
};
ModelDraw draw_model(const GeneratorConfig& cfg, int tau_max, std::uint64_t seed);

}  // namespace tsbag::support
