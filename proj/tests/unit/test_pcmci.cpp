#include "support.hpp"

#include "tsbag/ci_tests.hpp"
#include "tsbag/errors.hpp"
#include "tsbag/pcmci.hpp"
#include "tsbag/scm.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

using namespace tsbag;

namespace {

DiscoveryConfig oracle_cfg(int tau_max) {
    DiscoveryConfig cfg;
    cfg.tau_max = tau_max;
    cfg.alpha_pc = 0.5;
    return cfg;
}

TimeSeriesGraph collider_truth() {
    TimeSeriesGraph g(3, 1);
    g.set(0, 0, 2, LinkType::DirectedTo);
    g.set(1, 0, 2, LinkType::DirectedTo);
    return g;
}

TimeSeriesDataset simulated(const StructuralCausalModel& scm, std::size_t T, std::uint64_t seed) {
    Rng rng = make_rng(seed, {1});
    return simulate(scm, T, rng);
}

}  // namespace

TEST(Pc1, SingleLaggedLink) {
    TimeSeriesGraph truth(2, 1);
    truth.set(0, 1, 1, LinkType::DirectedTo);
    OracleTest test(truth, 1);
    const auto parents = pc1_lagged_phase(test, 2, oracle_cfg(1));
    EXPECT_TRUE(parents.parents(0).empty());
    ASSERT_EQ(parents.parents(1).size(), 1u);
    EXPECT_EQ(parents.parents(1)[0], (Variable{0, 1}));
}

TEST(Pc1, IndependentVariables) {
    TimeSeriesGraph truth(3, 2);
    OracleTest test(truth, 2);
    const auto parents = pc1_lagged_phase(test, 3, oracle_cfg(2));
    for (int j = 0; j < 3; ++j) EXPECT_TRUE(parents.parents(j).empty());
}

TEST(Pc1, ChainDropsIndirectAncestor) {
    TimeSeriesGraph truth(3, 2);
    truth.set(0, 1, 1, LinkType::DirectedTo);
    truth.set(1, 1, 2, LinkType::DirectedTo);
    OracleTest test(truth, 2);
    SepSetStore sepsets;
    const auto parents = pc1_lagged_phase(test, 3, oracle_cfg(2), &sepsets);
    const auto p2 = parents.parents(2);
    EXPECT_EQ(p2, (std::vector<Variable>{{1, 1}}));
    const auto* s = sepsets.find(PairKey{0, 2, 2});
    ASSERT_NE(s, nullptr);
    EXPECT_EQ(*s, (std::vector<Variable>{{1, 1}}));
}

TEST(Mci, SingleContemporaneousLink) {
    TimeSeriesGraph truth(2, 1);
    truth.set(0, 0, 1, LinkType::DirectedTo);
    OracleTest test(truth, 1);
    const auto cfg = oracle_cfg(1);
    const auto parents = pc1_lagged_phase(test, 2, cfg);
    const auto [skeleton, sepsets] = mci_skeleton_phase(test, 2, cfg, parents);
    TimeSeriesGraph expected(2, 1);
    expected.set(0, 0, 1, LinkType::Unoriented);
    EXPECT_EQ(skeleton, expected);
}

TEST(Mci, EmptyTruthGivesEmptySkeleton) {
    TimeSeriesGraph truth(3, 1);
    OracleTest test(truth, 1);
    const auto cfg = oracle_cfg(1);
    const auto [skeleton, sepsets] =
        mci_skeleton_phase(test, 3, cfg, pc1_lagged_phase(test, 3, cfg));
    EXPECT_EQ(skeleton, TimeSeriesGraph(3, 1));
}

TEST(Mci, ColliderSkeletonAndSepset) {
    const TimeSeriesGraph truth = collider_truth();
    OracleTest test(truth, 1);
    const auto cfg = oracle_cfg(1);
    const auto [skeleton, sepsets] =
        mci_skeleton_phase(test, 3, cfg, pc1_lagged_phase(test, 3, cfg));
    TimeSeriesGraph expected(3, 1);
    expected.set(0, 0, 2, LinkType::Unoriented);
    expected.set(1, 0, 2, LinkType::Unoriented);
    EXPECT_EQ(skeleton, expected);
    ASSERT_NE(sepsets.find(PairKey{0, 0, 1}), nullptr);
    EXPECT_FALSE(sepsets.contains(PairKey{0, 0, 1}, Variable{2, 0}));
}

TEST(Orientation, ColliderWithEmptySepset) {
    TimeSeriesGraph skel(3, 1);
    skel.set(0, 0, 2, LinkType::Unoriented);
    skel.set(1, 0, 2, LinkType::Unoriented);
    SepSetStore sepsets;
    sepsets.record(PairKey{0, 0, 1}, {}, 0.9);
    EXPECT_EQ(orient_colliders(skel, sepsets), collider_truth());
}

TEST(Orientation, NoTripleStaysUnoriented) {
    TimeSeriesGraph skel(2, 1);
    skel.set(0, 0, 1, LinkType::Unoriented);
    EXPECT_EQ(orient_colliders(skel, SepSetStore{}), skel);
}

TEST(Orientation, OppositeColliderDemandsConflict) {
    // 0 - 1 - 2 - 3 path with 0,2 and 1,3 non-adjacent and empty sepsets:
    // the collider at 1 wants 2 --> 1, the collider at 2 wants 1 --> 2.
    TimeSeriesGraph skel(4, 1);
    skel.set(0, 0, 1, LinkType::Unoriented);
    skel.set(1, 0, 2, LinkType::Unoriented);
    skel.set(2, 0, 3, LinkType::Unoriented);
    SepSetStore sepsets;
    sepsets.record(PairKey{0, 0, 2}, {}, 0.9);
    sepsets.record(PairKey{1, 0, 3}, {}, 0.9);
    const auto g = orient_colliders(skel, sepsets);
    EXPECT_EQ(g.get(1, 0, 2), LinkType::Conflict);
    EXPECT_EQ(g.get(0, 0, 1), LinkType::DirectedTo);
    EXPECT_EQ(g.get(3, 0, 2), LinkType::DirectedTo);
}

TEST(Orientation, LaggedArmCollider) {
    // X^0_{t-1} --> X^1_t o-o X^2_t with X^0_{t-1}, X^2_t separated by the empty set.
    TimeSeriesGraph skel(3, 1);
    skel.set(0, 1, 1, LinkType::DirectedTo);
    skel.set(1, 0, 2, LinkType::Unoriented);
    SepSetStore sepsets;
    sepsets.record(PairKey{0, 1, 2}, {}, 0.9);
    const auto g = orient_colliders(skel, sepsets);
    EXPECT_EQ(g.get(2, 0, 1), LinkType::DirectedTo);
    EXPECT_EQ(g.get(0, 1, 1), LinkType::DirectedTo);
}

TEST(Meek, R1) {
    TimeSeriesGraph g(3, 1);
    g.set(0, 0, 1, LinkType::DirectedTo);
    g.set(1, 0, 2, LinkType::Unoriented);
    EXPECT_EQ(apply_meek_rules(g).get(1, 0, 2), LinkType::DirectedTo);
}

TEST(Meek, R1FromLaggedParent) {
    TimeSeriesGraph g(2, 1);
    g.set(0, 1, 0, LinkType::DirectedTo);
    g.set(0, 0, 1, LinkType::Unoriented);
    EXPECT_EQ(apply_meek_rules(g).get(0, 0, 1), LinkType::DirectedTo);
}

TEST(Meek, R2) {
    TimeSeriesGraph g(3, 1);
    g.set(0, 0, 1, LinkType::DirectedTo);
    g.set(1, 0, 2, LinkType::DirectedTo);
    g.set(0, 0, 2, LinkType::Unoriented);
    EXPECT_EQ(apply_meek_rules(g).get(0, 0, 2), LinkType::DirectedTo);
}

TEST(Meek, R3) {
    // 0 o-o 1 --> 3, 0 o-o 2 --> 3, 0 o-o 3, 1 and 2 non-adjacent.
    TimeSeriesGraph g(4, 1);
    g.set(0, 0, 1, LinkType::Unoriented);
    g.set(0, 0, 2, LinkType::Unoriented);
    g.set(0, 0, 3, LinkType::Unoriented);
    g.set(1, 0, 3, LinkType::DirectedTo);
    g.set(2, 0, 3, LinkType::DirectedTo);
    const auto out = apply_meek_rules(g);
    EXPECT_EQ(out.get(0, 0, 3), LinkType::DirectedTo);
    EXPECT_EQ(out.get(0, 0, 1), LinkType::Unoriented);
}

TEST(Meek, R4) {
    // 0 o-o 1 --> 2 --> 3, 0 o-o 2, 0 o-o 3, 1 and 3 non-adjacent.
    TimeSeriesGraph g(4, 1);
    g.set(0, 0, 1, LinkType::Unoriented);
    g.set(0, 0, 2, LinkType::Unoriented);
    g.set(0, 0, 3, LinkType::Unoriented);
    g.set(1, 0, 2, LinkType::DirectedTo);
    g.set(2, 0, 3, LinkType::DirectedTo);
    EXPECT_EQ(apply_meek_rules(g).get(0, 0, 3), LinkType::DirectedTo);
}

TEST(Meek, FullyOrientedIsFixpoint) {
    TimeSeriesGraph g = collider_truth();
    g.set(0, 1, 1, LinkType::DirectedTo);
    EXPECT_EQ(apply_meek_rules(g), g);
}

TEST(Meek, InvariantUnderRelabelling) {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        TimeSeriesGraph g(5, 1);
        std::uniform_real_distribution<double> u(0, 1);
        for (const PairKey& k : g.pair_keys()) {
            const double r = u(rng);
            if (k.lag > 0) {
                if (r < 0.2) g.set(k, LinkType::DirectedTo);
            } else if (r < 0.3) {
                g.set(k, LinkType::Unoriented);
            } else if (r < 0.4) {
                g.set(k, LinkType::DirectedTo);
            } else if (r < 0.5) {
                g.set(k, LinkType::DirectedFrom);
            }
        }
        std::vector<int> perm(5);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        // Relabel: new index a holds old variable perm[a].
        TimeSeriesGraph relabelled(5, 1);
        for (int tau = 0; tau <= 1; ++tau)
            for (int a = 0; a < 5; ++a)
                for (int b = 0; b < 5; ++b)
                    if (tau > 0 || a != b) relabelled.set(a, tau, b, g.get(perm[a], tau, perm[b]));
        EXPECT_EQ(support::unpermute(apply_meek_rules(relabelled), perm), apply_meek_rules(g));
    }
}

TEST(RunPcmciPlus, EmptyTruth) {
    TimeSeriesGraph truth(3, 2);
    OracleTest test(truth, 2);
    EXPECT_EQ(run_pcmciplus(test, 3, oracle_cfg(2)), truth);
    EXPECT_EQ(run_pc_timeseries(test, 3, oracle_cfg(2)), truth);
}

TEST(RunPcmciPlus, TwoVariableContemporaneousIsUnoriented) {
    TimeSeriesGraph truth(2, 1);
    truth.set(0, 0, 1, LinkType::DirectedTo);
    OracleTest test(truth, 1);
    EXPECT_EQ(run_pcmciplus(test, 2, oracle_cfg(1)).get(0, 0, 1), LinkType::Unoriented);
}

TEST(RunPcmciPlus, ColliderRecoveredExactly) {
    const auto truth = collider_truth();
    OracleTest test(truth, 1);
    EXPECT_EQ(run_pcmciplus(test, 3, oracle_cfg(1)), truth);
    EXPECT_EQ(run_pc_timeseries(test, 3, oracle_cfg(1)), truth);
}

TEST(RunPcmciPlus, OracleMatchesEquivalenceClass) {
    GeneratorConfig gen;
    gen.n_vars = 4;
    gen.max_true_lag = 2;
    gen.autocorr = 0.6;
    gen.frac_contemporaneous = 0.5;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto m = support::draw_model(gen, 2, seed);
        OracleTest test(m.truth, 2);
        const auto expected = support::brute_force_pattern(m.truth);
        EXPECT_EQ(run_pcmciplus(test, 4, oracle_cfg(2)), expected) << "seed " << seed;
        EXPECT_EQ(run_pc_timeseries(test, 4, oracle_cfg(2)), expected) << "seed " << seed;
    }
}

TEST(RunPcmciPlus, ViaDatasetWithOracleSpec) {
    const auto truth = std::make_shared<const TimeSeriesGraph>(collider_truth());
    DiscoveryConfig cfg = oracle_cfg(1);
    cfg.ci_test = {CITestKind::Oracle, truth};
    const TimeSeriesDataset dummy(10, 3);
    EXPECT_EQ(run_pcmciplus(dummy, cfg), *truth);
    cfg.ci_test.truth.reset();
    EXPECT_THROW(run_pcmciplus(dummy, cfg), ConfigError);
}

class FiniteSample : public ::testing::TestWithParam<Algorithm> {};

TEST_P(FiniteSample, OrderIndependentUnderPermutation) {
    GeneratorConfig gen;
    gen.n_vars = 5;
    gen.max_true_lag = 2;
    DiscoveryConfig cfg;
    cfg.tau_max = 2;
    cfg.alpha_pc = 0.05;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto m = support::draw_model(gen, 2, seed);
        const auto data = simulated(m.scm, 300, seed);
        const auto base = run_algorithm(GetParam(), data, cfg);
        std::vector<int> perm(5);
        std::iota(perm.begin(), perm.end(), 0);
        Rng rng(seed);
        std::shuffle(perm.begin(), perm.end(), rng);
        const auto permuted = run_algorithm(GetParam(), data.permuted_columns(perm), cfg);
        EXPECT_EQ(support::unpermute(permuted, perm), base) << "seed " << seed;
    }
}

TEST_P(FiniteSample, DeterministicAndLaggedMarksDirected) {
    GeneratorConfig gen;
    gen.n_vars = 4;
    gen.max_true_lag = 2;
    DiscoveryConfig cfg;
    cfg.tau_max = 2;
    cfg.alpha_pc = 0.1;
    const auto m = support::draw_model(gen, 2, 3);
    const auto data = simulated(m.scm, 200, 3);
    Rng rng(11);
    std::vector<std::size_t> idx = default_index_set(data.length(), 2);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(idx.size() / 2);
    const auto a = run_algorithm(GetParam(), data, cfg, idx);
    const auto b = run_algorithm(GetParam(), data, cfg, idx);
    EXPECT_EQ(a, b);
    for (const PairKey& k : a.pair_keys()) {
        if (k.lag > 0) {
            EXPECT_TRUE(a.get(k) == LinkType::Absent || a.get(k) == LinkType::DirectedTo);
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Algorithms, FiniteSample,
                         ::testing::Values(Algorithm::PCMCIPlus, Algorithm::PCTimeSeries),
                         [](const auto& info) {
                             return std::string(info.param == Algorithm::PCMCIPlus ? "PCMCIPlus" : "PC");
                         });

TEST(SepSetStore, KeepsLargerPValue) {
    SepSetStore s;
    s.record(PairKey{0, 0, 1}, {{2, 0}}, 0.2);
    s.record(PairKey{0, 0, 1}, {}, 0.1);
    EXPECT_TRUE(s.contains(PairKey{0, 0, 1}, Variable{2, 0}));
    s.record(PairKey{0, 0, 1}, {}, 0.3);
    EXPECT_FALSE(s.contains(PairKey{0, 0, 1}, Variable{2, 0}));
}

TEST(DiscoveryConfig, Validation) {
    DiscoveryConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.alpha_pc = 1.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg.alpha_pc = 0.05;
    cfg.tau_max = 0;
    EXPECT_THROW(cfg.validate(), ConfigError);
}
