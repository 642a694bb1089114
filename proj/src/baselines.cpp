#include "imomd/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <queue>
#include <string>
#include <tuple>

#include "imomd/errors.hpp"

namespace imomd::baselines {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void check_endpoints(const RoutingGraph& g, NodeId s, NodeId t) {
    if (!g.contains(s) || !g.contains(t)) throw InputError("search endpoint outside graph");
}

std::vector<NodeId> walk_back(const std::vector<NodeId>& parent, NodeId from) {
    std::vector<NodeId> out;
    for (NodeId v = from; v != kNoNode; v = parent[v]) out.push_back(v);
    return out;
}

using Entry = std::pair<double, NodeId>;
using MinHeap = std::priority_queue<Entry, std::vector<Entry>, std::greater<>>;

}  // namespace

double path_cost(const RoutingGraph& g, const std::vector<NodeId>& path) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        auto w = g.edge_weight(path[i], path[i + 1]);
        if (!w) throw InternalError("path uses a missing edge");
        total += *w;
    }
    return total;
}

BaselineResult bidirectional_astar(const RoutingGraph& g, NodeId s, NodeId t) {
    check_endpoints(g, s, t);
    const auto t0 = Clock::now();
    BaselineResult r;
    if (s == t) {
        r.status = BaselineStatus::kSolved;
        r.node_path = {s};
        r.cost = 0.0;
        return r;
    }

    const std::size_t n = g.node_count();
    const double alpha = g.heuristic_scale();
    const GeoPoint ps = g.point(s);
    const GeoPoint pt = g.point(t);
    // Average of the two one-sided potentials; consistent in both directions.
    auto potential = [&](NodeId v) {
        return 0.5 * alpha * (haversine(g.point(v), pt) - haversine(g.point(v), ps));
    };

    std::vector<double> g_cost[2] = {std::vector<double>(n, kInfinity), std::vector<double>(n, kInfinity)};
    std::vector<NodeId> parent[2] = {std::vector<NodeId>(n, kNoNode), std::vector<NodeId>(n, kNoNode)};
    std::vector<std::uint8_t> expanded[2] = {std::vector<std::uint8_t>(n, 0), std::vector<std::uint8_t>(n, 0)};
    MinHeap open[2];
    const double sign[2] = {1.0, -1.0};

    g_cost[0][s] = 0.0;
    g_cost[1][t] = 0.0;
    open[0].push({potential(s), s});
    open[1].push({-potential(t), t});

    double mu = kInfinity;
    NodeId meet = kNoNode;

    auto prune = [&](int d) {
        while (!open[d].empty()) {
            auto [key, v] = open[d].top();
            if (key == g_cost[d][v] + sign[d] * potential(v)) break;
            open[d].pop();
        }
    };

    for (;;) {
        prune(0);
        prune(1);
        if (open[0].empty() || open[1].empty()) break;
        if (open[0].top().first + open[1].top().first >= mu) break;

        const int d = open[0].top().first <= open[1].top().first ? 0 : 1;
        const NodeId u = open[d].top().second;
        open[d].pop();
        if (!expanded[d][u]) {
            expanded[d][u] = 1;
            ++r.explored_nodes;
        }
        for (const Edge& e : g.neighbors(u)) {
            const double cand = g_cost[d][u] + e.weight;
            if (cand < g_cost[d][e.to]) {
                g_cost[d][e.to] = cand;
                parent[d][e.to] = u;
                open[d].push({cand + sign[d] * potential(e.to), e.to});
            }
            const double through = g_cost[d][e.to] + g_cost[1 - d][e.to];
            if (through < mu) {
                mu = through;
                meet = e.to;
            }
        }
    }

    r.wall_time = seconds_since(t0);
    if (meet == kNoNode) {
        r.status = BaselineStatus::kNoPath;
        return r;
    }
    auto forward = walk_back(parent[0], meet);
    std::reverse(forward.begin(), forward.end());
    auto backward = walk_back(parent[1], meet);
    forward.insert(forward.end(), backward.begin() + 1, backward.end());
    r.node_path = std::move(forward);
    r.cost = path_cost(g, r.node_path);
    r.status = BaselineStatus::kSolved;
    return r;
}

BaselineResult anastar(const RoutingGraph& g, NodeId s, NodeId t, double budget) {
    check_endpoints(g, s, t);
    if (!(budget > 0.0)) throw InputError("ANA* budget must be positive");
    const auto t0 = Clock::now();
    BaselineResult r;
    if (s == t) {
        r.status = BaselineStatus::kSolved;
        r.node_path = {s};
        r.cost = 0.0;
        r.trace.push_back({seconds_since(t0), 0.0});
        return r;
    }

    const std::size_t n = g.node_count();
    const double alpha = g.heuristic_scale();
    const GeoPoint pt = g.point(t);
    std::vector<double> h(n, -1.0);
    auto heur = [&](NodeId v) {
        if (h[v] < 0.0) h[v] = alpha * haversine(g.point(v), pt);
        return h[v];
    };

    std::vector<double> gc(n, kInfinity);
    std::vector<NodeId> parent(n, kNoNode);
    std::vector<std::uint8_t> in_open(n, 0);
    std::vector<std::uint8_t> expanded(n, 0);
    std::vector<NodeId> best_path;
    double G = kInfinity;

    // Heap entries carry the g they were keyed with so stale ones can be
    // recognized. Before the first solution the order is greedy on h;
    // afterwards it is descending e = (G - g) / h.
    struct Item {
        double key;
        double g;
        NodeId v;
    };
    auto less_urgent = [](const Item& a, const Item& b) {
        return std::tie(a.key, a.v) > std::tie(b.key, b.v);
    };
    std::vector<Item> heap;
    auto key_of = [&](NodeId v) {
        if (G == kInfinity) return heur(v);
        const double hv = heur(v);
        if (hv <= 0.0) return -kInfinity;
        return -(G - gc[v]) / hv;
    };
    auto push = [&](NodeId v) {
        heap.push_back({key_of(v), gc[v], v});
        std::push_heap(heap.begin(), heap.end(), less_urgent);
        in_open[v] = 1;
    };
    auto rebuild = [&] {
        std::vector<NodeId> keep;
        for (const Item& it : heap) {
            if (in_open[it.v] && it.g == gc[it.v]) {
                in_open[it.v] = 0;
                if (gc[it.v] + heur(it.v) < G) keep.push_back(it.v);
            }
        }
        heap.clear();
        for (NodeId v : keep) push(v);
    };

    gc[s] = 0.0;
    push(s);
    std::size_t ticks = 0;
    bool out_of_time = false;

    while (!heap.empty()) {
        if ((++ticks & 255u) == 0 && seconds_since(t0) >= budget) {
            out_of_time = true;
            break;
        }
        std::pop_heap(heap.begin(), heap.end(), less_urgent);
        const Item it = heap.back();
        heap.pop_back();
        if (!in_open[it.v] || it.g != gc[it.v]) continue;
        in_open[it.v] = 0;
        const NodeId u = it.v;
        if (gc[u] + heur(u) >= G) continue;

        if (u == t) {
            best_path = walk_back(parent, t);
            std::reverse(best_path.begin(), best_path.end());
            G = path_cost(g, best_path);
            r.trace.push_back({seconds_since(t0), G});
            rebuild();
            continue;
        }
        if (!expanded[u]) {
            expanded[u] = 1;
            ++r.explored_nodes;
        }
        for (const Edge& e : g.neighbors(u)) {
            const double cand = gc[u] + e.weight;
            if (cand < gc[e.to]) {
                gc[e.to] = cand;
                parent[e.to] = u;
                if (cand + heur(e.to) < G) push(e.to);
            }
        }
    }

    r.wall_time = seconds_since(t0);
    if (best_path.empty()) {
        r.status = out_of_time ? BaselineStatus::kNoPathYet : BaselineStatus::kNoPath;
        return r;
    }
    r.status = BaselineStatus::kSolved;
    r.node_path = std::move(best_path);
    r.cost = G;
    return r;
}

}  // namespace imomd::baselines
