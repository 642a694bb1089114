#pragma once

// Single-pair comparison planners: bidirectional A* and anytime
// nonparametric A* (ANA*), both guided by scaled haversine distance.

#include <cstddef>
#include <vector>

#include "imomd/graph.hpp"

namespace imomd::baselines {

enum class BaselineStatus { kSolved, kNoPath, kNoPathYet };

struct TracePoint {
    double wall_time = 0.0;
    double cost = 0.0;
};

struct BaselineResult {
    BaselineStatus status = BaselineStatus::kNoPath;
    std::vector<NodeId> node_path;
    double cost = kInfinity;
    /// Unique expansions; bidirectional search counts each direction separately.
    std::size_t explored_nodes = 0;
    double wall_time = 0.0;
    /// ANA* only: one entry per improved solution.
    std::vector<TracePoint> trace;
};

/// Exact shortest path between s and t. s == t yields the single-node path.
BaselineResult bidirectional_astar(const RoutingGraph& g, NodeId s, NodeId t);

/// Anytime search that emits strictly improving solutions until the budget
/// (seconds) runs out or optimality is proven. Infinite budget runs to the end.
BaselineResult anastar(const RoutingGraph& g, NodeId s, NodeId t, double budget = kInfinity);

/// Sum of edge weights along `path`, accumulated from its first node.
double path_cost(const RoutingGraph& g, const std::vector<NodeId>& path);

}  // namespace imomd::baselines
