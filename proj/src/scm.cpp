#include "tsbag/scm.hpp"

#include "tsbag/errors.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace tsbag {

double apply_dependency(DependencyFunc f, double x) {
    if (f == DependencyFunc::Linear) return x;
    return x + 5.0 * x * x * std::exp(-x * x / 20.0);
}

int StructuralCausalModel::max_lag() const {
    int lag = 0;
    for (double a : auto_coeffs) {
        if (a != 0.0) lag = 1;
    }
    for (const auto& l : cross_links) lag = std::max(lag, l.lag);
    return lag;
}

int default_cross_link_count(int n_vars) {
    return n_vars == 2 ? 1 : static_cast<int>(std::floor(1.5 * n_vars));
}

void GeneratorConfig::validate() const {
    if (n_vars < 2) throw ConfigError("generator needs n_vars >= 2");
    if (!(frac_contemporaneous >= 0.0 && frac_contemporaneous <= 1.0)) {
        throw ConfigError("frac_contemporaneous must lie in [0, 1]");
    }
    if (max_true_lag < 1) throw ConfigError("max_true_lag must be >= 1");
    if (!(frac_nonlinear >= 0.0 && frac_nonlinear <= 1.0)) {
        throw ConfigError("frac_nonlinear must lie in [0, 1]");
    }
    if (!(noise_mix >= 0.0 && noise_mix <= 1.0)) throw ConfigError("noise_mix must lie in [0, 1]");
    if (!(autocorr >= 0.0 && autocorr <= 1.0)) throw ConfigError("autocorr must lie in [0, 1]");
    if (max_attempts < 1) throw ConfigError("max_attempts must be >= 1");
    const int links = n_cross_links.value_or(default_cross_link_count(n_vars));
    if (links < 0) throw ConfigError("n_cross_links must be >= 0");
    // Lagged cross-links plus one orientation per contemporaneous pair.
    const long capacity = static_cast<long>(n_vars) * (n_vars - 1) * max_true_lag +
                          static_cast<long>(n_vars) * (n_vars - 1) / 2;
    if (links > capacity) throw ConfigError("n_cross_links exceeds the number of distinct links");
}

namespace {

bool has_link(const std::vector<CausalLink>& links, int source, int target, int lag) {
    return std::any_of(links.begin(), links.end(), [&](const CausalLink& l) {
        if (l.lag != lag) return false;
        if (l.source == source && l.target == target) return true;
        // A contemporaneous pair carries at most one link.
        return lag == 0 && l.source == target && l.target == source;
    });
}

double weibull_mean(double shape) { return std::tgamma(1.0 + 1.0 / shape); }

// Advances the process; returns false on overflow (or throws when asked to).
// `out` receives rows [keep_from, steps) when non-null.
bool run_process(const StructuralCausalModel& scm, std::size_t steps, std::size_t keep_from,
                 Rng& rng, TimeSeriesDataset* out) {
    const int n = scm.n_vars;
    const int max_lag = std::max(scm.max_lag(), 1);
    const std::vector<int> order = contemporaneous_order(scm);

    std::vector<std::vector<const CausalLink*>> incoming(n);
    for (const auto& l : scm.cross_links) incoming[l.target].push_back(&l);

    // Ring buffer of the last max_lag + 1 rows.
    const std::size_t ring = static_cast<std::size_t>(max_lag) + 1;
    std::vector<double> hist(ring * n, 0.0);
    auto at = [&](std::size_t t, int j) -> double& { return hist[(t % ring) * n + j]; };

    std::vector<std::normal_distribution<double>> gauss;
    std::vector<std::weibull_distribution<double>> weib;
    std::vector<double> weib_mean(n, 0.0);
    for (int j = 0; j < n; ++j) {
        gauss.emplace_back(0.0, scm.noise[j].sigma);
        weib.emplace_back(scm.noise[j].weibull_shape, 1.0);
        weib_mean[j] = weibull_mean(scm.noise[j].weibull_shape);
    }
    std::vector<double> eta(n);

    for (std::size_t t = 0; t < steps; ++t) {
        for (int j = 0; j < n; ++j) {
            eta[j] = scm.noise[j].kind == NoiseKind::Gaussian ? gauss[j](rng)
                                                              : weib[j](rng) - weib_mean[j];
        }
        for (int j : order) {
            double v = eta[j];
            if (t >= 1) v += scm.auto_coeffs[j] * at(t - 1, j);
            for (const CausalLink* l : incoming[j]) {
                if (t < static_cast<std::size_t>(l->lag)) continue;
                v += l->coefficient * apply_dependency(l->func, at(t - l->lag, l->source));
            }
            if (!(std::abs(v) <= kOverflowThreshold)) {
                if (out) {
                    throw NumericalOverflow("simulated value exceeded " +
                                            std::to_string(kOverflowThreshold) + " at step " +
                                            std::to_string(t));
                }
                return false;
            }
            at(t, j) = v;
        }
        if (out && t >= keep_from) {
            for (int j = 0; j < n; ++j) (*out)(t - keep_from, j) = at(t, j);
        }
    }
    return true;
}

}  // namespace

std::vector<int> contemporaneous_order(const StructuralCausalModel& scm) {
    const int n = scm.n_vars;
    std::vector<int> indegree(n, 0);
    std::vector<std::vector<int>> children(n);
    for (const auto& l : scm.cross_links) {
        if (l.lag == 0) {
            children[l.source].push_back(l.target);
            ++indegree[l.target];
        }
    }
    // Smallest-index-first Kahn ordering keeps the order deterministic.
    std::vector<int> order;
    std::vector<bool> done(n, false);
    for (int step = 0; step < n; ++step) {
        int pick = -1;
        for (int v = 0; v < n; ++v) {
            if (!done[v] && indegree[v] == 0) {
                pick = v;
                break;
            }
        }
        if (pick < 0) throw NotADag("contemporaneous links form a cycle");
        done[pick] = true;
        order.push_back(pick);
        for (int c : children[pick]) --indegree[c];
    }
    return order;
}

double spectral_radius(const StructuralCausalModel& scm) {
    const int n = scm.n_vars;
    const int p = std::max(scm.max_lag(), 1);
    // X_t = A0 X_t + sum_tau A_tau X_{t-tau}  =>  X_t = (I - A0)^{-1} sum_tau A_tau X_{t-tau}
    std::vector<Eigen::MatrixXd> a(p + 1, Eigen::MatrixXd::Zero(n, n));
    for (int j = 0; j < n; ++j) a[1](j, j) += scm.auto_coeffs[j];
    for (const auto& l : scm.cross_links) a[l.lag](l.target, l.source) += l.coefficient;
    const Eigen::MatrixXd inv = (Eigen::MatrixXd::Identity(n, n) - a[0]).inverse();

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n * p, n * p);
    for (int tau = 1; tau <= p; ++tau) companion.block(0, (tau - 1) * n, n, n) = inv * a[tau];
    if (p > 1) companion.block(n, 0, n * (p - 1), n * (p - 1)).setIdentity();
    const Eigen::VectorXcd ev = companion.eigenvalues();
    double rho = 0.0;
    for (Eigen::Index k = 0; k < ev.size(); ++k) rho = std::max(rho, std::abs(ev[k]));
    return rho;
}

bool check_stationarity(const StructuralCausalModel& scm) {
    if (!(spectral_radius(scm) < 1.0)) return false;
    Rng probe(0x5eed5eed5eedULL);
    return run_process(scm, 1000, 0, probe, nullptr);
}

StructuralCausalModel sample_model(const GeneratorConfig& cfg, Rng& rng) {
    cfg.validate();
    const int n = cfg.n_vars;
    const int n_links = cfg.n_cross_links.value_or(default_cross_link_count(n));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> auto_dist(std::max(0.0, cfg.autocorr - 0.3),
                                                     cfg.autocorr);
    std::uniform_real_distribution<double> sigma_dist(0.5, 2.0);
    std::uniform_real_distribution<double> coeff_dist(0.1, 0.5);
    std::uniform_int_distribution<int> var_dist(0, n - 1);
    std::uniform_int_distribution<int> lag_dist(1, cfg.max_true_lag);

    for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
        StructuralCausalModel scm;
        scm.n_vars = n;
        for (int j = 0; j < n; ++j) scm.auto_coeffs.push_back(auto_dist(rng));
        for (int j = 0; j < n; ++j) {
            NoiseSpec ns;
            if (unit(rng) < cfg.noise_mix) {
                ns.kind = NoiseKind::Weibull;
            } else {
                ns.sigma = sigma_dist(rng);
            }
            scm.noise.push_back(ns);
        }
        // Contemporaneous links always point forward in this order.
        std::vector<int> rank(n);
        {
            std::vector<int> perm(n);
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            for (int k = 0; k < n; ++k) rank[perm[k]] = k;
        }
        while (static_cast<int>(scm.cross_links.size()) < n_links) {
            int i = var_dist(rng);
            int j = var_dist(rng);
            if (i == j) continue;
            const bool contemp = unit(rng) < cfg.frac_contemporaneous;
            int lag = 0;
            if (contemp) {
                if (rank[i] > rank[j]) std::swap(i, j);
            } else {
                lag = lag_dist(rng);
            }
            if (has_link(scm.cross_links, i, j, lag)) continue;
            CausalLink link{i, j, lag, coeff_dist(rng), DependencyFunc::Linear};
            if (unit(rng) < 0.5) link.coefficient = -link.coefficient;
            if (unit(rng) < cfg.frac_nonlinear) link.func = DependencyFunc::NonlinearBump;
            scm.cross_links.push_back(link);
        }
        if (check_stationarity(scm)) return scm;
    }
    throw MaxRejections("no stationary model found in " + std::to_string(cfg.max_attempts) +
                        " attempts");
}

TimeSeriesDataset simulate(const StructuralCausalModel& scm, std::size_t length, Rng& rng) {
    const int max_lag = std::max(scm.max_lag(), 1);
    if (length < 2 * static_cast<std::size_t>(max_lag)) {
        throw ConfigError("sample length must be at least twice the largest model lag");
    }
    const std::size_t burn_in = 10 * static_cast<std::size_t>(max_lag) + 100;
    TimeSeriesDataset out(length, static_cast<std::size_t>(scm.n_vars));
    run_process(scm, burn_in + length, burn_in, rng, &out);
    return out;
}

TimeSeriesGraph true_graph(const StructuralCausalModel& scm, int tau_max) {
    if (scm.max_lag() > tau_max) {
        throw LagExceeded("model lag " + std::to_string(scm.max_lag()) + " exceeds tau_max " +
                          std::to_string(tau_max));
    }
    TimeSeriesGraph g(scm.n_vars, tau_max);
    for (int j = 0; j < scm.n_vars; ++j) {
        if (scm.auto_coeffs[j] != 0.0) g.set(j, 1, j, LinkType::DirectedTo);
    }
    for (const auto& l : scm.cross_links) g.set(l.source, l.lag, l.target, LinkType::DirectedTo);
    return g;
}

}  // namespace tsbag
