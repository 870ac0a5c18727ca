#pragma once

#include "tsbag/dataset.hpp"
#include "tsbag/graph.hpp"
#include "tsbag/rng.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace tsbag {

enum class NoiseKind { Gaussian, Weibull };

struct NoiseSpec {
    NoiseKind kind = NoiseKind::Gaussian;
    double sigma = 1.0;          // Gaussian standard deviation
    double weibull_shape = 2.0;  // Weibull draws use scale 1 and are mean-centred
};

enum class DependencyFunc { Linear, NonlinearBump };

/// f(x) = x for Linear, x + 5 x^2 exp(-x^2 / 20) for NonlinearBump.
double apply_dependency(DependencyFunc f, double x);

struct CausalLink {
    int source = 0;
    int target = 0;
    int lag = 0;
    double coefficient = 0.0;
    DependencyFunc func = DependencyFunc::Linear;
};

/// X^j_t = a_j X^j_{t-1} + sum_links c f(X^i_{t-lag}) + eta^j_t
struct StructuralCausalModel {
    int n_vars = 0;
    std::vector<double> auto_coeffs;
    std::vector<CausalLink> cross_links;
    std::vector<NoiseSpec> noise;

    /// Largest lag over autodependencies (1 when any a_j != 0) and cross-links.
    int max_lag() const;
};

struct GeneratorConfig {
    int n_vars = 5;
    double autocorr = 0.95;
    double frac_contemporaneous = 0.3;
    int max_true_lag = 5;
    double frac_nonlinear = 0.0;
    double noise_mix = 0.0;  // probability that a variable gets Weibull noise
    // Overrides L = floor(1.5 N) (L = 1 for N = 2) when set.
    std::optional<int> n_cross_links;
    std::uint64_t seed = 0;
    int max_attempts = 1000;

    void validate() const;
};

int default_cross_link_count(int n_vars);

inline constexpr double kOverflowThreshold = 1e4;

/// Draws a random stationary model with an acyclic contemporaneous sub-graph.
/// Throws MaxRejections when no stationary draw is found in max_attempts.
StructuralCausalModel sample_model(const GeneratorConfig& cfg, Rng& rng);

/// Spectral radius of the companion matrix of the linearised process
/// (NonlinearBump links contribute their linear term).
double spectral_radius(const StructuralCausalModel& scm);

/// Spectral radius < 1 and a 1000-step probe stays below kOverflowThreshold.
bool check_stationarity(const StructuralCausalModel& scm);

/// Topological order of the lag-0 sub-graph; throws NotADag on a cycle.
std::vector<int> contemporaneous_order(const StructuralCausalModel& scm);

/// Exactly `length` rows after a burn-in of 10 * max_lag + 100 steps.
/// Throws NumericalOverflow if any value exceeds kOverflowThreshold.
TimeSeriesDataset simulate(const StructuralCausalModel& scm, std::size_t length, Rng& rng);

/// Ground-truth graph; throws LagExceeded when a model lag exceeds tau_max.
TimeSeriesGraph true_graph(const StructuralCausalModel& scm, int tau_max);

}  // namespace tsbag
