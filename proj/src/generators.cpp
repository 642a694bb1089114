#include "imomd/generators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

#include "imomd/errors.hpp"

namespace imomd::gen {

namespace {

struct Point2 {
    double x, y;
};

std::vector<Point2> square_points(std::size_t n, std::mt19937_64& rng, double side) {
    std::uniform_real_distribution<double> u(0.0, side);
    std::vector<Point2> pts(n);
    for (auto& p : pts) {
        p.x = u(rng);
        p.y = u(rng);
    }
    return pts;
}

double euclid(const Point2& a, const Point2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

void check_order(std::size_t n) {
    if (n < 2) throw InputError("instance needs at least a source and a target");
}

constexpr double kBaseLat = 47.60;
constexpr double kBaseLon = -122.35;
constexpr double kGridStep = 0.0005;  // degrees between neighboring grid nodes

// Lays out nodes on integer grid coordinates and records them by position.
class GridMap {
public:
    NodeId at(int x, int y, std::uint8_t region) {
        auto [it, fresh] = index_.try_emplace({x, y}, kNoNode);
        if (fresh) {
            it->second = builder_.add_node({kBaseLat + y * kGridStep, kBaseLon + x * kGridStep});
            ids_.insert(static_cast<ingest::ExternalId>(it->second) + 1);
            region_.push_back(region);
        }
        return it->second;
    }
    void link(NodeId a, NodeId b) { builder_.add_edge(a, b); }

    void grid(int x0, int y0, int w, int h, std::uint8_t region) {
        for (int x = x0; x < x0 + w; ++x) {
            for (int y = y0; y < y0 + h; ++y) {
                const NodeId v = at(x, y, region);
                if (x > x0) link(at(x - 1, y, region), v);
                if (y > y0) link(at(x, y - 1, region), v);
            }
        }
    }

    GeneratedMap finish() && {
        GeneratedMap out;
        out.map.graph = std::move(builder_).build();
        out.map.ids = std::move(ids_);
        out.region = std::move(region_);
        return out;
    }

private:
    RoutingGraph::Builder builder_;
    ingest::IdMap ids_;
    std::map<std::pair<int, int>, NodeId> index_;
    std::vector<std::uint8_t> region_;
};

ingest::ExternalId ext(NodeId v) { return static_cast<ingest::ExternalId>(v) + 1; }

}  // namespace

rtsp::DestGraph random_complete_instance(std::size_t n, std::mt19937_64& rng) {
    check_order(n);
    auto pts = square_points(n, rng, 1000.0);
    rtsp::DestGraph dg(n, 0, n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1; k < n; ++k) dg.set(i, k, euclid(pts[i], pts[k]));
    }
    return dg;
}

rtsp::DestGraph random_incomplete_instance(std::size_t n, std::mt19937_64& rng,
                                           double extra_edge_probability) {
    check_order(n);
    auto pts = square_points(n, rng, 1000.0);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);

    std::vector<bool> edge(n * n, false);
    for (std::size_t i = 1; i < n; ++i) {
        const auto j = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
        edge[perm[i] * n + perm[j]] = edge[perm[j] * n + perm[i]] = true;
    }
    std::bernoulli_distribution extra(extra_edge_probability);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1; k < n; ++k) {
            if (extra(rng)) edge[i * n + k] = true;
        }
    }
    rtsp::DestGraph dg(n, 0, n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1; k < n; ++k) {
            if (edge[i * n + k]) dg.set(i, k, euclid(pts[i], pts[k]));
        }
    }
    return dg;
}

GeneratedMap bug_trap(const BugTrapSpec& spec) {
    const int c = static_cast<int>(spec.chamber);
    const int w = static_cast<int>(spec.entry_width);
    const int len = static_cast<int>(spec.corridor);
    const int out_w = static_cast<int>(spec.outside ? spec.outside : spec.chamber);
    const int gap = static_cast<int>(spec.gap);
    if (c < 3) throw InputError("bug trap chamber must be at least 3 nodes wide");
    if (w < 1 || w > c) throw InputError("entry width must lie in [1, chamber]");
    if (!spec.water_gap && len < 1) throw InputError("bug trap corridor needs at least one node");
    if (gap < 2) throw InputError("gap must be at least 2 columns");
    if (out_w < 2) throw InputError("outside region must be at least 2 nodes wide");

    GridMap m;
    const int mid = c / 2;
    const int out_x = c + gap;
    m.grid(0, 0, c, c, 0);
    m.grid(out_x, 0, out_w, c, 1);

    NodeId entry;
    if (spec.water_gap) {
        entry = m.at(c - 1, 0, 0);
        m.link(entry, m.at(out_x, 0, 1));
    } else {
        entry = m.at(-1, mid, 2);
        const int lo = std::max(0, std::min(mid - w / 2, c - w));
        for (int y = lo; y < lo + w; ++y) m.link(entry, m.at(0, y, 0));
        NodeId prev = entry;
        for (int j = 1; j <= len; ++j) {
            const NodeId v = m.at(-1 - j, mid, 2);
            m.link(prev, v);
            prev = v;
        }
        const int road_x = -1 - len;
        for (int y = mid + 1; y <= c + 1; ++y) {
            const NodeId v = m.at(road_x, y, 2);
            m.link(prev, v);
            prev = v;
        }
        for (int x = road_x + 1; x <= out_x; ++x) {
            const NodeId v = m.at(x, c + 1, 2);
            m.link(prev, v);
            prev = v;
        }
        const NodeId drop = m.at(out_x, c, 2);
        m.link(prev, drop);
        m.link(drop, m.at(out_x, c - 1, 1));
    }

    const NodeId source = m.at(c - 2, mid, 0);
    const NodeId target = m.at(out_x + out_w / 2, mid, 1);
    GeneratedMap out = std::move(m).finish();
    out.entry = entry;
    out.scenario.source = ext(source);
    out.scenario.target = ext(target);
    out.informed = out.scenario;
    out.informed->pseudo.push_back({ext(entry), false});
    return out;
}

GeneratedMap geometric_graph(const GeometricSpec& spec) {
    const std::size_t n = spec.nodes;
    if (n < 2) throw InputError("geometric graph needs at least 2 nodes");
    if (!(spec.radius > 0.0)) throw InputError("radius must be positive");
    if (spec.objectives + 2 > n) throw InputError("more destinations than nodes");

    std::mt19937_64 rng(spec.seed);
    auto pts = square_points(n, rng, 1.0);

    GeneratedMap out;
    RoutingGraph::Builder b;
    constexpr double kSpan = 0.02;
    for (std::size_t i = 0; i < n; ++i) {
        b.add_node({kBaseLat + pts[i].y * kSpan, kBaseLon + pts[i].x * kSpan});
        out.map.ids.insert(static_cast<ingest::ExternalId>(i) + 1);
    }

    struct Pair {
        double d;
        std::size_t i, k;
    };
    std::vector<Pair> pairs;
    pairs.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1; k < n; ++k) pairs.push_back({euclid(pts[i], pts[k]), i, k});
    }
    std::sort(pairs.begin(), pairs.end(),
              [](const Pair& a, const Pair& c) { return std::tie(a.d, a.i, a.k) < std::tie(c.d, c.i, c.k); });

    DisjointSet ds(n);
    for (const auto& p : pairs) {
        if (p.d > spec.radius) break;
        b.add_edge(static_cast<NodeId>(p.i), static_cast<NodeId>(p.k));
        ds.unite(p.i, p.k);
    }
    for (const auto& p : pairs) {
        if (ds.component_count() == 1) break;
        if (ds.unite(p.i, p.k)) b.add_edge(static_cast<NodeId>(p.i), static_cast<NodeId>(p.k));
    }
    out.map.graph = std::move(b).build();
    out.region.assign(n, 1);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    out.scenario.source = ext(static_cast<NodeId>(order[0]));
    out.scenario.target = ext(static_cast<NodeId>(order[1]));
    for (std::size_t j = 0; j < spec.objectives; ++j) {
        out.scenario.objectives.push_back(ext(static_cast<NodeId>(order[2 + j])));
    }
    return out;
}

}  // namespace imomd::gen
