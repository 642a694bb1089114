#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace imomd {

using NodeId = std::uint32_t;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kEarthRadiusMeters = 6'371'000.0;

/// Latitude/longitude in degrees.
struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;

    bool valid() const noexcept;
    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Great-circle distance in meters on a sphere of radius kEarthRadiusMeters.
double haversine(const GeoPoint& a, const GeoPoint& b) noexcept;

struct Edge {
    NodeId to;
    double weight;
};

/**
 * Undirected, simple, positively weighted graph over geographic nodes.
 *
 * Stored as compressed adjacency: the half-edges of node v live in
 * edges_[offsets_[v], offsets_[v + 1]) sorted by neighbor id. Immutable once
 * built, so it can be shared freely across threads.
 */
class RoutingGraph {
public:
    class Builder;

    RoutingGraph() = default;

    std::size_t node_count() const noexcept { return points_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size() / 2; }

    const GeoPoint& point(NodeId v) const { return points_[v]; }
    std::span<const GeoPoint> points() const noexcept { return points_; }

    std::span<const Edge> neighbors(NodeId v) const {
        return {edges_.data() + offsets_[v], edges_.data() + offsets_[v + 1]};
    }
    std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }

    std::optional<double> edge_weight(NodeId u, NodeId v) const;

    bool contains(NodeId v) const noexcept { return v < points_.size(); }

    /// Largest factor alpha <= 1 such that alpha * haversine(u, v) <= w(u, v)
    /// on every edge; scaling haversine by it gives a consistent heuristic.
    double heuristic_scale() const noexcept { return heuristic_scale_; }

private:
    std::vector<GeoPoint> points_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Edge> edges_;
    double heuristic_scale_ = 1.0;
};

/// Collects nodes and edges, then enforces the simple-graph invariants.
/// Duplicate edges collapse to the minimum weight.
class RoutingGraph::Builder {
public:
    NodeId add_node(const GeoPoint& p);

    /// Omitted weight means the haversine length of the edge.
    void add_edge(NodeId u, NodeId v, std::optional<double> weight = std::nullopt);

    std::size_t node_count() const noexcept { return points_.size(); }

    RoutingGraph build() &&;

private:
    struct RawEdge {
        NodeId u, v;
        double w;
    };
    std::vector<GeoPoint> points_;
    std::vector<RawEdge> edges_;
};

/// Result of a single-source shortest path search.
struct ShortestPaths {
    NodeId source = kNoNode;
    std::vector<double> cost;
    std::vector<NodeId> parent;

    bool reachable(NodeId v) const { return cost[v] < kInfinity; }
    /// Node sequence source..v, empty when v is unreachable.
    std::vector<NodeId> path_to(NodeId v) const;
};

/// Exact shortest paths; equal-cost ties resolve to the smaller NodeId.
ShortestPaths dijkstra(const RoutingGraph& g, NodeId source);

/// Union-find with path compression and union by size.
class DisjointSet {
public:
    explicit DisjointSet(std::size_t n);

    std::size_t size() const noexcept { return parent_.size(); }
    std::size_t find(std::size_t x);
    /// Returns true when a and b were in different sets.
    bool unite(std::size_t a, std::size_t b);
    std::size_t component_count() const noexcept { return components_; }

private:
    void check(std::size_t x) const;

    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
    std::size_t components_;
};

/// Unites all pairs and reports whether a single component remains.
bool connectivity_check(DisjointSet& ds, std::span<const std::pair<std::size_t, std::size_t>> pairs);

}  // namespace imomd
