#include <gtest/gtest.h>

#include <random>

#include "imomd/errors.hpp"
#include "imomd/generators.hpp"
#include "imomd/search_tree.hpp"
#include "test_support.hpp"

namespace imomd {
namespace {

using testing::line_point;

// One planner-style growth step for a single tree.
void grow(SearchTree& t, NodeId v_rand) {
    if (t.contains(v_rand)) {
        t.rewire(v_rand);
        return;
    }
    if (auto anchor = t.nearest_expandable(v_rand)) {
        for (NodeId v : t.extend(*anchor, v_rand)) t.rewire(v);
    }
}

TEST(NearestExpandable, SingleFrontierNode) {
    auto g = testing::path_graph(5);
    SearchTree t(g, 0, 0);
    ASSERT_EQ(t.frontier().size(), 1u);
    EXPECT_EQ(t.nearest_expandable(4), 0u);
    EXPECT_EQ(t.nearest_expandable(2), 0u);
}

TEST(NearestExpandable, SaturatedTreeHasNone) {
    auto g = testing::path_graph(4);
    SearchTree t(g, 0, 0);
    t.extend(0, 3);
    EXPECT_TRUE(t.saturated());
    EXPECT_FALSE(t.nearest_expandable(2).has_value());

    RoutingGraph::Builder b;
    b.add_node({0, 0});
    auto lone = std::move(b).build();
    SearchTree single(lone, 0, 0);
    EXPECT_FALSE(single.nearest_expandable(0).has_value());
}

TEST(NearestExpandable, MatchesExhaustiveScan) {
    std::mt19937_64 rng(30);
    auto g = testing::random_graph(30, 0.15, rng, false);
    SearchTree t(g, 0, 0);
    std::uniform_int_distribution<NodeId> pick(0, 29);
    for (int step = 0; step < 60; ++step) {
        const NodeId target = pick(rng);
        // Reference frontier straight from the definition.
        NodeId best = kNoNode;
        double best_d = kInfinity;
        for (NodeId v = 0; v < g.node_count(); ++v) {
            if (!t.contains(v)) continue;
            bool open = false;
            for (const Edge& e : g.neighbors(v)) open = open || !t.contains(e.to);
            if (!open) continue;
            const double d = haversine(g.point(v), g.point(target));
            if (d < best_d) {
                best_d = d;
                best = v;
            }
        }
        auto got = t.nearest_expandable(target);
        if (best == kNoNode) {
            EXPECT_FALSE(got.has_value());
        } else {
            ASSERT_TRUE(got.has_value());
            EXPECT_EQ(*got, best);
        }
        grow(t, target);
        t.validate();
    }
}

TEST(Extend, CorridorIntoDeadEndAddsBoth) {
    // 3 - 0 - 1 - 2 on a line, node 4 isolated beyond 2.
    RoutingGraph::Builder b;
    b.add_node(line_point(1));
    b.add_node(line_point(2));
    b.add_node(line_point(3));
    b.add_node(line_point(0));
    b.add_node(line_point(6));
    b.add_edge(0, 1);
    b.add_edge(1, 2);
    b.add_edge(0, 3);
    auto g = std::move(b).build();
    SearchTree t(g, 0, 0);
    EXPECT_EQ(t.extend(0, 4), (std::vector<NodeId>{1, 2}));
    t.validate();
}

TEST(Extend, IntersectionStopsCompression) {
    auto g = testing::grid_graph(5, 5);
    const NodeId center = 2 * 5 + 2;
    SearchTree t(g, 0, center);
    auto added = t.extend(center, 4 * 5 + 2);
    ASSERT_EQ(added.size(), 1u);
    EXPECT_EQ(added[0], 3u * 5 + 2);
}

TEST(Extend, PathGraphInOneStep) {
    auto g = testing::path_graph(10);
    SearchTree t(g, 0, 0);
    auto added = t.extend(0, 9);
    EXPECT_EQ(added, (std::vector<NodeId>{1, 2, 3, 4, 5, 6, 7, 8, 9}));
    EXPECT_TRUE(t.saturated());
    t.validate();
}

TEST(Extend, NonExpandableAnchorIsNoOp) {
    auto g = testing::path_graph(3);
    SearchTree t(g, 0, 0);
    t.extend(0, 2);
    EXPECT_TRUE(t.extend(0, 2).empty());
}

TEST(ChooseParent, SingleNeighbor) {
    auto g = testing::path_graph(3);
    SearchTree t(g, 0, 0);
    EXPECT_EQ(t.choose_parent(1), 0u);
}

TEST(ChooseParent, PicksSmallestCostToCome) {
    // root 0; a = 1 at cost 5, b = 2 at cost 4; v = 3 with w(a,v)=1, w(b,v)=3.
    // Leaves 4 and 5 keep a and b branching so extend stops at them.
    RoutingGraph::Builder b;
    b.add_node({47.600, -122.300});
    b.add_node({47.601, -122.301});
    b.add_node({47.601, -122.299});
    b.add_node({47.602, -122.300});
    b.add_node({47.601, -122.303});
    b.add_node({47.601, -122.297});
    b.add_edge(0, 1, 5.0);
    b.add_edge(0, 2, 4.0);
    b.add_edge(1, 3, 1.0);
    b.add_edge(2, 3, 3.0);
    b.add_edge(1, 4, 1.0);
    b.add_edge(2, 5, 1.0);
    auto g = std::move(b).build();
    SearchTree t(g, 0, 0);
    ASSERT_EQ(t.extend(0, 1), (std::vector<NodeId>{1}));
    ASSERT_EQ(t.extend(0, 2), (std::vector<NodeId>{2}));
    EXPECT_EQ(t.choose_parent(3), 1u);
}

TEST(ChooseParent, NoTreeNeighborIsInternalError) {
    auto g = testing::path_graph(4);
    SearchTree t(g, 0, 0);
    EXPECT_THROW(t.choose_parent(3), InternalError);
}

TEST(Rewire, TriangleShortcut) {
    RoutingGraph::Builder b;
    b.add_node({47.600, -122.300});
    b.add_node({47.601, -122.300});
    b.add_node({47.6005, -122.2995});
    b.add_edge(0, 1, 10.0);
    b.add_edge(0, 2, 1.0);
    b.add_edge(2, 1, 2.0);
    auto g = std::move(b).build();
    SearchTree t(g, 0, 0);
    // The corridor stops at the sampled node, so 2 needs its own extend.
    ASSERT_EQ(t.extend(0, 1), (std::vector<NodeId>{1}));
    ASSERT_EQ(t.extend(0, 2), (std::vector<NodeId>{2}));
    EXPECT_EQ(t.cost(1), 10.0);
    EXPECT_EQ(t.cost(2), 1.0);

    auto none = t.rewire(1);
    EXPECT_EQ(none.rewired, 0u);
    EXPECT_EQ(t.cost(1), 10.0);

    auto r = t.rewire(2);
    EXPECT_EQ(r.rewired, 1u);
    EXPECT_EQ(t.cost(1), 3.0);
    EXPECT_EQ(t.parent(1), 2u);
    t.validate();
}

TEST(Rewire, PropagatesThroughSubtree) {
    // 0 -10- 1 - 3 - 4 chain hanging off 1, shortcut 0 -1- 2 -1- 1.
    RoutingGraph::Builder b;
    for (int i = 0; i < 5; ++i) b.add_node(line_point(static_cast<std::size_t>(i)));
    b.add_edge(0, 1, 10.0);
    b.add_edge(1, 3, 1.0);
    b.add_edge(3, 4, 1.0);
    b.add_edge(0, 2, 1.0);
    b.add_edge(2, 1, 1.0);
    auto g = std::move(b).build();
    SearchTree t(g, 0, 0);
    ASSERT_EQ(t.extend(0, 1), (std::vector<NodeId>{1}));
    ASSERT_EQ(t.extend(1, 4), (std::vector<NodeId>{3, 4}));
    ASSERT_EQ(t.extend(0, 2), (std::vector<NodeId>{2}));
    ASSERT_TRUE(t.contains(4));
    ASSERT_TRUE(t.contains(2));
    const double before = t.cost(4);
    auto r = t.rewire(2);
    EXPECT_EQ(r.rewired, 1u);
    EXPECT_EQ(t.cost(4), before - 8.0);
    EXPECT_EQ(r.decreased.size(), 3u);
    t.validate();
}

TEST(SearchTree, StoredCostsMatchRecomputation) {
    std::mt19937_64 rng(99);
    for (int round = 0; round < 5; ++round) {
        auto g = testing::random_graph(120, 0.05, rng, round % 2 == 0);
        SearchTree t(g, 0, static_cast<NodeId>(round));
        std::uniform_int_distribution<NodeId> pick(0, 119);
        for (int step = 0; step < 400; ++step) {
            grow(t, pick(rng));
            if (step % 20 == 0) t.validate();
        }
        t.validate();
        for (NodeId v : t.nodes()) {
            auto path = t.path_to_root(v);
            double sum = 0.0;
            for (auto it = path.rbegin(); it + 1 != path.rend(); ++it) sum += *g.edge_weight(*it, *(it + 1));
            EXPECT_EQ(sum, t.cost(v));
        }
    }
}

TEST(SearchTree, CostsNeverBeatDijkstraAndConverge) {
    gen::GeometricSpec spec;
    spec.nodes = 200;
    spec.radius = 0.12;
    spec.seed = 5;
    auto m = gen::geometric_graph(spec);
    const auto& g = m.map.graph;
    SearchTree t(g, 0, 0);
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<NodeId> pick(0, 199);
    for (int i = 0; i < 10000; ++i) grow(t, pick(rng));
    t.validate();

    auto sp = dijkstra(g, 0);
    std::size_t equal = 0;
    for (NodeId v : t.nodes()) {
        EXPECT_GE(t.cost(v), sp.cost[v] * (1.0 - 1e-9));
        if (testing::close_rel(t.cost(v), sp.cost[v])) ++equal;
    }
    const double rate = static_cast<double>(equal) / static_cast<double>(t.size());
    RecordProperty("equality_rate", std::to_string(rate));
    if (t.saturated() && t.dirty_count() == 0) EXPECT_EQ(equal, t.size());
}

}  // namespace
}  // namespace imomd
