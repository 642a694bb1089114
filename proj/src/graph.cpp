#include "imomd/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>
#include <tuple>

#include "imomd/errors.hpp"

namespace imomd {

bool GeoPoint::valid() const noexcept {
    return std::isfinite(lat) && std::isfinite(lon) && lat >= -90.0 && lat <= 90.0 &&
           lon >= -180.0 && lon <= 180.0;
}

double haversine(const GeoPoint& a, const GeoPoint& b) noexcept {
    constexpr double kDeg = std::numbers::pi / 180.0;
    const double phi1 = a.lat * kDeg;
    const double phi2 = b.lat * kDeg;
    const double dphi = (b.lat - a.lat) * kDeg;
    const double dlambda = (b.lon - a.lon) * kDeg;
    const double s1 = std::sin(dphi / 2.0);
    const double s2 = std::sin(dlambda / 2.0);
    double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
    h = std::clamp(h, 0.0, 1.0);
    return 2.0 * kEarthRadiusMeters * std::asin(std::sqrt(h));
}

std::optional<double> RoutingGraph::edge_weight(NodeId u, NodeId v) const {
    if (!contains(u) || !contains(v)) return std::nullopt;
    auto adj = neighbors(u);
    auto it = std::lower_bound(adj.begin(), adj.end(), v,
                               [](const Edge& e, NodeId x) { return e.to < x; });
    if (it == adj.end() || it->to != v) return std::nullopt;
    return it->weight;
}

NodeId RoutingGraph::Builder::add_node(const GeoPoint& p) {
    if (!p.valid()) {
        throw InputError("invalid coordinate (" + std::to_string(p.lat) + ", " +
                         std::to_string(p.lon) + ")");
    }
    if (points_.size() >= kNoNode) throw InputError("too many nodes");
    points_.push_back(p);
    return static_cast<NodeId>(points_.size() - 1);
}

void RoutingGraph::Builder::add_edge(NodeId u, NodeId v, std::optional<double> weight) {
    if (u >= points_.size() || v >= points_.size()) {
        throw InputError("edge endpoint out of range");
    }
    if (u == v) throw InputError("self-loop on node " + std::to_string(u));
    const double w = weight ? *weight : haversine(points_[u], points_[v]);
    if (!(w > 0.0) || !std::isfinite(w)) {
        throw InputError("edge weight must be positive and finite, got " + std::to_string(w));
    }
    edges_.push_back({std::min(u, v), std::max(u, v), w});
}

RoutingGraph RoutingGraph::Builder::build() && {
    std::sort(edges_.begin(), edges_.end(), [](const RawEdge& a, const RawEdge& b) {
        return std::tie(a.u, a.v, a.w) < std::tie(b.u, b.v, b.w);
    });
    // After sorting, the first of each (u, v) run carries the minimum weight.
    edges_.erase(std::unique(edges_.begin(), edges_.end(),
                             [](const RawEdge& a, const RawEdge& b) {
                                 return a.u == b.u && a.v == b.v;
                             }),
                 edges_.end());

    RoutingGraph g;
    const std::size_t n = points_.size();
    std::vector<std::size_t> degree(n, 0);
    for (const auto& e : edges_) {
        ++degree[e.u];
        ++degree[e.v];
    }
    g.offsets_.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + degree[v];
    g.edges_.resize(g.offsets_[n]);
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    double scale = 1.0;
    for (const auto& e : edges_) {
        g.edges_[cursor[e.u]++] = {e.v, e.w};
        g.edges_[cursor[e.v]++] = {e.u, e.w};
        const double h = haversine(points_[e.u], points_[e.v]);
        if (h > 0.0) scale = std::min(scale, e.w / h);
    }
    for (std::size_t v = 0; v < n; ++v) {
        std::sort(g.edges_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]),
                  g.edges_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]),
                  [](const Edge& a, const Edge& b) { return a.to < b.to; });
    }
    // Shave a little off so rounding in haversine never makes the heuristic overshoot.
    g.heuristic_scale_ = scale * (1.0 - 1e-9);
    g.points_ = std::move(points_);
    edges_.clear();
    return g;
}

std::vector<NodeId> ShortestPaths::path_to(NodeId v) const {
    if (v >= cost.size() || !reachable(v)) return {};
    std::vector<NodeId> path;
    for (NodeId x = v; x != kNoNode; x = parent[x]) path.push_back(x);
    std::reverse(path.begin(), path.end());
    return path;
}

ShortestPaths dijkstra(const RoutingGraph& g, NodeId source) {
    if (!g.contains(source)) {
        throw InputError("dijkstra source " + std::to_string(source) + " out of range");
    }
    ShortestPaths sp;
    sp.source = source;
    sp.cost.assign(g.node_count(), kInfinity);
    sp.parent.assign(g.node_count(), kNoNode);
    std::vector<bool> settled(g.node_count(), false);

    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    sp.cost[source] = 0.0;
    open.emplace(0.0, source);
    while (!open.empty()) {
        auto [d, u] = open.top();
        open.pop();
        if (settled[u]) continue;
        settled[u] = true;
        for (const Edge& e : g.neighbors(u)) {
            if (settled[e.to]) continue;
            const double nd = d + e.weight;
            if (nd < sp.cost[e.to] || (nd == sp.cost[e.to] && u < sp.parent[e.to])) {
                sp.cost[e.to] = nd;
                sp.parent[e.to] = u;
                open.emplace(nd, e.to);
            }
        }
    }
    return sp;
}

DisjointSet::DisjointSet(std::size_t n) : parent_(n), size_(n, 1), components_(n) {
    for (std::size_t i = 0; i < n; ++i) parent_[i] = i;
}

void DisjointSet::check(std::size_t x) const {
    if (x >= parent_.size()) {
        throw InputError("disjoint-set element " + std::to_string(x) + " outside universe of " +
                         std::to_string(parent_.size()));
    }
}

std::size_t DisjointSet::find(std::size_t x) {
    check(x);
    std::size_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) x = std::exchange(parent_[x], root);
    return root;
}

bool DisjointSet::unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    --components_;
    return true;
}

bool connectivity_check(DisjointSet& ds,
                        std::span<const std::pair<std::size_t, std::size_t>> pairs) {
    for (auto [i, j] : pairs) ds.unite(i, j);
    return ds.component_count() <= 1;
}

}  // namespace imomd
