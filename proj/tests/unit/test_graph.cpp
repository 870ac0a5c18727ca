#include "support.hpp"

#include "tsbag/errors.hpp"
#include "tsbag/graph.hpp"

#include <gtest/gtest.h>

using namespace tsbag;

TEST(Graph, FreshGraphIsAbsent) {
    TimeSeriesGraph g(3, 2);
    for (const PairKey& k : g.pair_keys()) EXPECT_EQ(g.get(k), LinkType::Absent);
}

TEST(Graph, ContemporaneousMirror) {
    TimeSeriesGraph g(3, 1);
    g.set(1, 0, 2, LinkType::DirectedTo);
    EXPECT_EQ(g.get(2, 0, 1), LinkType::DirectedFrom);
    g.set(2, 0, 0, LinkType::DirectedTo);
    EXPECT_EQ(g.get(0, 0, 2), LinkType::DirectedFrom);
    g.set(0, 0, 1, LinkType::Conflict);
    EXPECT_EQ(g.get(1, 0, 0), LinkType::Conflict);
}

TEST(Graph, MirrorConsistencyOnRandomGraphs) {
    Rng rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = support::random_graph(4, 2, 0.5, rng);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (i != j) EXPECT_EQ(g.get(i, 0, j), mirror(g.get(j, 0, i)));
    }
}

TEST(Graph, LaggedAutodependency) {
    TimeSeriesGraph g(2, 3);
    g.set(1, 3, 1, LinkType::DirectedTo);
    EXPECT_EQ(g.get(1, 3, 1), LinkType::DirectedTo);
}

TEST(Graph, InvalidAccess) {
    TimeSeriesGraph g(3, 2);
    EXPECT_THROW(g.get(0, 3, 1), OutOfRange);
    EXPECT_THROW(g.get(-1, 1, 1), OutOfRange);
    EXPECT_THROW(g.get(0, 1, 3), OutOfRange);
    EXPECT_THROW(g.get(1, 0, 1), OutOfRange);
    EXPECT_THROW(g.set(0, 1, 1, LinkType::Unoriented), InvalidMark);
    EXPECT_THROW(g.set(0, 1, 1, LinkType::DirectedFrom), InvalidMark);
    EXPECT_THROW(g.set(0, 2, 1, LinkType::Conflict), InvalidMark);
}

TEST(Graph, PairKeysAreCanonicalAndOrdered) {
    TimeSeriesGraph g(4, 2);
    const auto keys = g.pair_keys();
    EXPECT_EQ(keys.size(), 4u * 4u * 2u + 6u);
    EXPECT_EQ(keys.size(), g.pair_count());
    EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end()));
    for (std::size_t n = 0; n < keys.size(); ++n) {
        if (keys[n].lag == 0) EXPECT_LT(keys[n].source, keys[n].target);
        EXPECT_EQ(g.dense_index(keys[n]), n);
    }
}

TEST(Graph, AdjacencySet) {
    TimeSeriesGraph g(3, 1);
    EXPECT_TRUE(adjacency_set(g, 2).empty());
    g.set(1, 1, 2, LinkType::DirectedTo);
    EXPECT_EQ(adjacency_set(g, 2), (std::vector<PairKey>{{1, 1, 2}}));
    TimeSeriesGraph h(3, 1);
    h.set(1, 0, 2, LinkType::Unoriented);
    EXPECT_EQ(adjacency_set(h, 1), (std::vector<PairKey>{{2, 0, 1}}));
}

TEST(Graph, EqualityAndDiff) {
    TimeSeriesGraph a(3, 1);
    a.set(0, 1, 2, LinkType::DirectedTo);
    EXPECT_TRUE(graphs_equal(a, a));
    EXPECT_TRUE(diff(a, a).empty());
    TimeSeriesGraph b = a;
    b.set(1, 0, 2, LinkType::Unoriented);
    EXPECT_FALSE(graphs_equal(a, b));
    const auto d = diff(a, b);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d[0].key, (PairKey{1, 0, 2}));
    EXPECT_EQ(d[0].first, LinkType::Absent);
    EXPECT_EQ(d[0].second, LinkType::Unoriented);
    EXPECT_THROW(graphs_equal(a, TimeSeriesGraph(3, 2)), ShapeMismatch);
    EXPECT_THROW(diff(a, TimeSeriesGraph(4, 1)), ShapeMismatch);
}

TEST(Graph, ContemporaneousCycle) {
    TimeSeriesGraph g(3, 1);
    g.set(0, 0, 1, LinkType::DirectedTo);
    g.set(1, 0, 2, LinkType::DirectedTo);
    EXPECT_FALSE(has_contemporaneous_cycle(g));
    g.set(2, 0, 0, LinkType::DirectedTo);
    EXPECT_TRUE(has_contemporaneous_cycle(g));
    g.set(2, 0, 0, LinkType::Unoriented);
    EXPECT_FALSE(has_contemporaneous_cycle(g));
}

TEST(Graph, TokensRoundTrip) {
    for (LinkType m : kAllLinkTypes) EXPECT_EQ(link_type_from_token(to_token(m)), m);
    EXPECT_FALSE(link_type_from_token("<->").has_value());
}

TEST(Graph, SerializationRoundTrip) {
    Rng rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + trial % 5;
        const auto g = support::random_graph(n, trial % 4, 0.3, rng);
        EXPECT_EQ(parse_graph(serialize(g)), g);
    }
    TimeSeriesGraph g(2, 1);
    g.set(1, 0, 0, LinkType::DirectedTo);
    EXPECT_EQ(serialize(g), "2 1\n0 0 1 <--\n");
}

TEST(Graph, ParseErrorsNameTheLine) {
    try {
        parse_graph("2 1\n0 1 1 -->\n0 0 1 ???\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
    EXPECT_THROW(parse_graph("2 1\n0 1 1 o-o\n"), ParseError);
    EXPECT_THROW(parse_graph("2 1\n0 2 1 -->\n"), ParseError);
    EXPECT_THROW(parse_graph(""), ParseError);
}
