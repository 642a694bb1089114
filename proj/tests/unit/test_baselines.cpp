#include <gtest/gtest.h>

#include <random>

#include "imomd/baselines.hpp"
#include "imomd/errors.hpp"
#include "imomd/generators.hpp"
#include "test_support.hpp"

namespace imomd::baselines {
namespace {

TEST(BiAstar, SameEndpoint) {
    auto g = testing::path_graph(3);
    auto r = bidirectional_astar(g, 1, 1);
    EXPECT_EQ(r.status, BaselineStatus::kSolved);
    EXPECT_EQ(r.node_path, (std::vector<NodeId>{1}));
    EXPECT_EQ(r.cost, 0.0);
}

TEST(BiAstar, LineGraph) {
    auto g = testing::path_graph(8, {1, 2, 3, 4, 5, 6, 7});
    auto r = bidirectional_astar(g, 0, 7);
    ASSERT_EQ(r.status, BaselineStatus::kSolved);
    EXPECT_EQ(r.node_path, (std::vector<NodeId>{0, 1, 2, 3, 4, 5, 6, 7}));
    EXPECT_EQ(r.cost, 28.0);
}

TEST(BiAstar, DisconnectedIsNoPath) {
    RoutingGraph::Builder b;
    for (std::size_t i = 0; i < 3; ++i) b.add_node(testing::line_point(i));
    b.add_edge(0, 1);
    auto g = std::move(b).build();
    EXPECT_EQ(bidirectional_astar(g, 0, 2).status, BaselineStatus::kNoPath);
    EXPECT_EQ(anastar(g, 0, 2).status, BaselineStatus::kNoPath);
}

TEST(BiAstar, RejectsBadEndpoints) {
    auto g = testing::path_graph(3);
    EXPECT_THROW(bidirectional_astar(g, 0, 9), InputError);
    EXPECT_THROW(anastar(g, 9, 0), InputError);
    EXPECT_THROW(anastar(g, 0, 1, 0.0), InputError);
}

TEST(BiAstar, MatchesDijkstraOnRandomPairs) {
    std::mt19937_64 rng(71);
    for (int round = 0; round < 6; ++round) {
        auto g = round < 3 ? gen::geometric_graph({300, 0.1, static_cast<std::uint64_t>(round), 0}).map.graph
                           : testing::random_graph(150, 0.04, rng, true);
        std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(g.node_count() - 1));
        for (int pair = 0; pair < 30; ++pair) {
            const NodeId s = pick(rng), t = pick(rng);
            auto sp = dijkstra(g, s);
            auto r = bidirectional_astar(g, s, t);
            if (!sp.reachable(t)) {
                EXPECT_EQ(r.status, BaselineStatus::kNoPath);
                continue;
            }
            ASSERT_EQ(r.status, BaselineStatus::kSolved);
            EXPECT_TRUE(testing::close_rel(r.cost, sp.cost[t])) << r.cost << " vs " << sp.cost[t];
            EXPECT_EQ(r.node_path.front(), s);
            EXPECT_EQ(r.node_path.back(), t);
            EXPECT_EQ(path_cost(g, r.node_path), r.cost);
        }
    }
}

TEST(AnaStar, SingleEdgeSingleEmission) {
    auto g = testing::path_graph(2, {5.0});
    auto r = anastar(g, 0, 1);
    ASSERT_EQ(r.status, BaselineStatus::kSolved);
    ASSERT_EQ(r.trace.size(), 1u);
    EXPECT_EQ(r.trace[0].cost, 5.0);
}

TEST(AnaStar, UnboundedMatchesDijkstraWithDecreasingTrace) {
    std::mt19937_64 rng(72);
    for (int round = 0; round < 6; ++round) {
        auto g = round < 3 ? gen::geometric_graph({300, 0.1, 10 + static_cast<std::uint64_t>(round), 0}).map.graph
                           : testing::random_graph(150, 0.04, rng, true);
        std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(g.node_count() - 1));
        for (int pair = 0; pair < 30; ++pair) {
            const NodeId s = pick(rng), t = pick(rng);
            auto sp = dijkstra(g, s);
            auto r = anastar(g, s, t);
            if (!sp.reachable(t)) {
                EXPECT_EQ(r.status, BaselineStatus::kNoPath);
                continue;
            }
            ASSERT_EQ(r.status, BaselineStatus::kSolved);
            EXPECT_TRUE(testing::close_rel(r.cost, sp.cost[t]));
            EXPECT_EQ(path_cost(g, r.node_path), r.cost);
            ASSERT_FALSE(r.trace.empty());
            EXPECT_EQ(r.trace.back().cost, r.cost);
            for (std::size_t i = 1; i < r.trace.size(); ++i) {
                EXPECT_LT(r.trace[i].cost, r.trace[i - 1].cost);
                EXPECT_GE(r.trace[i].wall_time, r.trace[i - 1].wall_time);
            }
        }
    }
}

TEST(AnaStar, TinyBudgetOnLongPathIsNoPathYet) {
    RoutingGraph::Builder b;
    for (std::size_t i = 0; i < 200000; ++i) b.add_node(testing::line_point(i, 1e-5));
    for (NodeId v = 0; v + 1 < 200000; ++v) b.add_edge(v, v + 1);
    auto g = std::move(b).build();
    auto r = anastar(g, 0, 199999, 1e-7);
    EXPECT_EQ(r.status, BaselineStatus::kNoPathYet);
    EXPECT_TRUE(r.node_path.empty());
}

TEST(PathCost, SumsFromTheFront) {
    auto g = testing::path_graph(4, {1.5, 2.5, 3.0});
    EXPECT_EQ(path_cost(g, {0, 1, 2, 3}), 7.0);
    EXPECT_EQ(path_cost(g, {2}), 0.0);
    EXPECT_THROW(path_cost(g, {0, 2}), InternalError);
}

}  // namespace
}  // namespace imomd::baselines
