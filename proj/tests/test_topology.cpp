#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "wsnsim/rng.hpp"
#include "wsnsim/topology.hpp"

using namespace wsnsim;

TEST(Rng, MatchesPublishedSplitMix64Stream) {
    SplitMix64 rng(0);
    EXPECT_EQ(rng.next(), 0xe220a8397b1dcdafULL);
    EXPECT_EQ(rng.next(), 0x6e789e6aa1b965f4ULL);
    EXPECT_EQ(rng.next(), 0x06c45d188009454fULL);
}

TEST(Rng, BelowStaysInRange) {
    SplitMix64 rng(42);
    for (int i = 0; i < 10000; ++i) EXPECT_LT(rng.below(7), 7u);
    EXPECT_EQ(rng.below(1), 0u);
}

TEST(Topology, HundredNodePlacementStaysInArea) {
    const auto t = generate_topology(100, 100, 100, {0, 0}, 1);
    ASSERT_EQ(t.size(), 100u);
    for (const auto& p : t.nodes) {
        EXPECT_GE(p.x, 0.0);
        EXPECT_LE(p.x, 100.0);
        EXPECT_GE(p.y, 0.0);
        EXPECT_LE(p.y, 100.0);
    }
    EXPECT_EQ(t.base, (Position{0, 0}));
}

TEST(Topology, SameSeedSamePlacement) {
    EXPECT_EQ(generate_topology(1, 10, 10, {0, 0}, 7), generate_topology(1, 10, 10, {0, 0}, 7));
    EXPECT_NE(generate_topology(3, 10, 10, {0, 0}, 7).nodes, generate_topology(3, 10, 10, {0, 0}, 8).nodes);
}

// Frozen from tests/oracles/splitmix_topology.py 5 100 100 3.
TEST(Topology, MatchesIndependentReferenceGenerator) {
    const std::vector<Position> expected{{11.345034205715454, 70.02935135929023},
                                         {61.297468254662434, 7.286673677178534},
                                         {21.643910878148485, 63.622231572764775},
                                         {13.514585858115058, 88.87184341115442},
                                         {49.10624550614454, 88.85294016527162}};
    const auto t = generate_topology(5, 100, 100, {0, 0}, 3);
    ASSERT_EQ(t.nodes.size(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        EXPECT_EQ(t.nodes[i].x, expected[i].x) << "node " << i;
        EXPECT_EQ(t.nodes[i].y, expected[i].y) << "node " << i;
    }
}

TEST(Topology, RejectsEmptyOrDegenerateArea) {
    EXPECT_THROW(generate_topology(0, 10, 10, {0, 0}, 1), std::invalid_argument);
    EXPECT_THROW(generate_topology(5, 0, 10, {0, 0}, 1), std::invalid_argument);
    EXPECT_THROW(generate_topology(5, 10, -1, {0, 0}, 1), std::invalid_argument);
}

TEST(Distance, Basics) {
    EXPECT_DOUBLE_EQ(distance({0, 0}, {3, 4}), 5.0);
    EXPECT_EQ(distance({2, 2}, {2, 2}), 0.0);
    EXPECT_NEAR(distance({0, 0}, {100, 100}), std::sqrt(20000.0), 1e-9);
    EXPECT_NEAR(distance({0, 0}, {100, 100}), 141.42135623730951, 1e-9);
}

TEST(Distance, SymmetricAndNonNegative) {
    SplitMix64 rng(5);
    for (int i = 0; i < 200; ++i) {
        const Position a{rng.uniform() * 100, rng.uniform() * 100};
        const Position b{rng.uniform() * 100, rng.uniform() * 100};
        EXPECT_GE(distance(a, b), 0.0);
        EXPECT_EQ(distance(a, b), distance(b, a));
    }
}

namespace {
Topology manual(std::vector<Position> nodes, Position base = {0, 0}) {
    Topology t;
    t.nodes = std::move(nodes);
    t.base = base;
    t.width = t.height = 100;
    return t;
}
} // namespace

// Costs 200 + 3200 = 3400 and 50 + 4050 = 4100.
TEST(NeighborTable, RanksByDiffusionCost) {
    const auto t = manual({{50, 50}, {45, 45}, {40, 40}});
    const auto table = build_neighbor_table(0, t, 8);
    ASSERT_EQ(table.size(), 2u);
    EXPECT_EQ(table[0].neighbor, 2u);
    EXPECT_DOUBLE_EQ(table[0].cost(), 3400.0);
    EXPECT_EQ(table[1].neighbor, 1u);
    EXPECT_DOUBLE_EQ(table[1].cost(), 4100.0);

    const auto one = build_neighbor_table(0, t, 1);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].neighbor, 2u);
}

TEST(NeighborTable, EmptyWhenNothingIsCloserToBase) {
    const auto t = manual({{1, 1}, {40, 40}, {45, 45}});
    EXPECT_TRUE(build_neighbor_table(0, t, 8).empty());
}

TEST(NeighborTable, UnknownNodeThrows) {
    const auto t = manual({{1, 1}});
    EXPECT_THROW(build_neighbor_table(3, t, 8), std::out_of_range);
}

TEST(NeighborTable, EveryEntryMakesProgressAndTablesArePure) {
    const auto t = generate_topology(60, 100, 100, {0, 0}, 11);
    const auto a = build_all_neighbor_tables(t, 8);
    const auto b = build_all_neighbor_tables(t, 8);
    EXPECT_EQ(a, b);
    for (NodeId s = 0; s < t.size(); ++s) {
        EXPECT_LE(a[s].size(), 8u);
        for (std::size_t i = 0; i < a[s].size(); ++i) {
            EXPECT_LT(a[s][i].dist_to_base, t.dist_to_base(s));
            if (i > 0) {
                EXPECT_LE(a[s][i - 1].cost(), a[s][i].cost());
            }
        }
    }
}

TEST(TopologyCsv, RoundTripsExactly) {
    const auto t = generate_topology(25, 80, 60, {3.5, -2}, 99);
    std::stringstream ss;
    write_topology_csv(ss, t);
    const auto back = read_topology_csv(ss);
    EXPECT_EQ(back.nodes, t.nodes);
    EXPECT_EQ(back.base, t.base);
}

TEST(TopologyCsv, Format) {
    const auto t = manual({{1.5, 2}, {3, 4.25}}, {0, 0});
    std::stringstream ss;
    write_topology_csv(ss, t);
    EXPECT_EQ(ss.str(), "# base,0,0\nnode_id,x,y\n0,1.5,2\n1,3,4.25\n");
}

TEST(TopologyCsv, RejectsMalformedInput) {
    std::stringstream no_base("node_id,x,y\n0,1,2\n");
    EXPECT_THROW(read_topology_csv(no_base), std::invalid_argument);
    std::stringstream gap("# base,0,0\nnode_id,x,y\n0,1,2\n2,3,4\n");
    EXPECT_THROW(read_topology_csv(gap), std::invalid_argument);
    std::stringstream junk("# base,0,0\nnode_id,x,y\n0,abc,2\n");
    EXPECT_THROW(read_topology_csv(junk), std::invalid_argument);
}
