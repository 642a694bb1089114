#include "imomd/search_tree.hpp"

#include <algorithm>
#include <string>

#include "imomd/errors.hpp"
#include "imomd/kernels.hpp"

namespace imomd {

SearchTree::SearchTree(const RoutingGraph& graph, std::size_t destination, NodeId root)
    : graph_(&graph), destination_(destination), root_(root) {
    const std::size_t n = graph.node_count();
    if (!graph.contains(root)) throw InputError("tree root outside graph");
    in_tree_.assign(n, 0);
    dirty_.assign(n, 0);
    parent_.assign(n, kNoNode);
    parent_weight_.assign(n, 0.0);
    cost_.assign(n, kInfinity);
    outside_.assign(n, 0);
    first_child_.assign(n, kNoNode);
    next_sibling_.assign(n, kNoNode);
    prev_sibling_.assign(n, kNoNode);
    frontier_pos_.assign(n, kAbsent);
    insert(root, kNoNode, 0.0);
}

void SearchTree::link_child(NodeId parent, NodeId child) {
    parent_[child] = parent;
    prev_sibling_[child] = kNoNode;
    next_sibling_[child] = first_child_[parent];
    if (first_child_[parent] != kNoNode) prev_sibling_[first_child_[parent]] = child;
    first_child_[parent] = child;
}

void SearchTree::unlink_child(NodeId child) {
    const NodeId p = parent_[child];
    if (prev_sibling_[child] != kNoNode) {
        next_sibling_[prev_sibling_[child]] = next_sibling_[child];
    } else {
        first_child_[p] = next_sibling_[child];
    }
    if (next_sibling_[child] != kNoNode) prev_sibling_[next_sibling_[child]] = prev_sibling_[child];
    prev_sibling_[child] = next_sibling_[child] = kNoNode;
    parent_[child] = kNoNode;
}

void SearchTree::frontier_remove(NodeId v) {
    const auto pos = frontier_pos_[v];
    const NodeId last = frontier_.back();
    frontier_[pos] = last;
    frontier_pos_[last] = pos;
    frontier_.pop_back();
    frontier_pos_[v] = kAbsent;
}

void SearchTree::mark_dirty(NodeId v) {
    if (!dirty_[v]) {
        dirty_[v] = 1;
        ++dirty_count_;
    }
}

void SearchTree::insert(NodeId v, NodeId parent, double edge_weight) {
    in_tree_[v] = 1;
    if (parent == kNoNode) {
        cost_[v] = 0.0;
    } else {
        link_child(parent, v);
        parent_weight_[v] = edge_weight;
        cost_[v] = cost_[parent] + edge_weight;
    }
    std::uint32_t outside = 0;
    for (const Edge& e : graph_->neighbors(v)) {
        if (!in_tree_[e.to]) {
            ++outside;
        } else if (--outside_[e.to] == 0) {
            frontier_remove(e.to);
        }
    }
    outside_[v] = outside;
    if (outside > 0) {
        frontier_pos_[v] = static_cast<std::uint32_t>(frontier_.size());
        frontier_.push_back(v);
    }
    order_.push_back(v);
    mark_dirty(v);
}

std::optional<NodeId> SearchTree::nearest_expandable(NodeId target) const {
    if (frontier_.empty()) return std::nullopt;
    return kernels::nearest_by_haversine(frontier_, graph_->points(), graph_->point(target)).node;
}

NodeId SearchTree::choose_parent(NodeId v) const {
    NodeId best = kNoNode;
    double best_cost = kInfinity;
    for (const Edge& e : graph_->neighbors(v)) {
        if (!in_tree_[e.to]) continue;
        const double c = cost_[e.to] + e.weight;
        // Neighbors are sorted by id, so strict < keeps the smaller id on ties.
        if (c < best_cost) {
            best_cost = c;
            best = e.to;
        }
    }
    if (best == kNoNode) {
        throw InternalError("choose_parent: node " + std::to_string(v) + " has no neighbor in tree " +
                            std::to_string(destination_));
    }
    return best;
}

std::vector<NodeId> SearchTree::extend(NodeId anchor, NodeId target) {
    std::vector<NodeId> added;
    if (!expandable(anchor)) return added;

    const GeoPoint& goal = graph_->point(target);
    NodeId next = kNoNode;
    double best = kInfinity;
    for (const Edge& e : graph_->neighbors(anchor)) {
        if (in_tree_[e.to]) continue;
        const double d = haversine(graph_->point(e.to), goal);
        if (d < best || (d == best && e.to < next)) {
            best = d;
            next = e.to;
        }
    }

    while (next != kNoNode) {
        const NodeId parent = choose_parent(next);
        insert(next, parent, *graph_->edge_weight(parent, next));
        added.push_back(next);
        const NodeId current = next;
        next = kNoNode;
        if (current == target || outside_[current] != 1) break;
        for (const Edge& e : graph_->neighbors(current)) {
            if (!in_tree_[e.to]) {
                next = e.to;
                break;
            }
        }
    }
    return added;
}

SearchTree::RewireResult SearchTree::rewire(NodeId v) {
    RewireResult result;
    if (!in_tree_[v]) return result;
    if (dirty_[v]) {
        dirty_[v] = 0;
        --dirty_count_;
    }

    std::vector<NodeId> stack;
    for (const Edge& e : graph_->neighbors(v)) {
        const NodeId n = e.to;
        if (!in_tree_[n] || n == parent_[v]) continue;
        const double through = cost_[v] + e.weight;
        if (!(through < cost_[n])) continue;

        // v cannot be a descendant of n: that would force cost(v) > cost(n).
        if (parent_[n] != kNoNode) unlink_child(n);
        link_child(v, n);
        parent_weight_[n] = e.weight;
        cost_[n] = through;
        ++result.rewired;
        result.decreased.push_back(n);
        mark_dirty(n);

        stack.clear();
        for (NodeId c = first_child_[n]; c != kNoNode; c = next_sibling_[c]) stack.push_back(c);
        while (!stack.empty()) {
            const NodeId x = stack.back();
            stack.pop_back();
            cost_[x] = cost_[parent_[x]] + parent_weight_[x];
            result.decreased.push_back(x);
            mark_dirty(x);
            for (NodeId c = first_child_[x]; c != kNoNode; c = next_sibling_[c]) stack.push_back(c);
        }
    }
    return result;
}

std::vector<NodeId> SearchTree::path_to_root(NodeId v) const {
    std::vector<NodeId> path;
    if (!in_tree_[v]) return path;
    for (NodeId x = v; x != kNoNode; x = parent_[x]) path.push_back(x);
    return path;
}

void SearchTree::validate() const {
    auto fail = [&](const std::string& what, NodeId v) {
        throw InternalError("tree " + std::to_string(destination_) + ": " + what + " at node " +
                            std::to_string(v));
    };
    if (!in_tree_[root_] || parent_[root_] != kNoNode || cost_[root_] != 0.0) {
        fail("root state corrupt", root_);
    }
    std::size_t members = 0;
    std::size_t dirty = 0;
    for (NodeId v = 0; v < graph_->node_count(); ++v) {
        if (dirty_[v]) ++dirty;
        if (!in_tree_[v]) {
            if (parent_[v] != kNoNode || frontier_pos_[v] != kAbsent || dirty_[v]) {
                fail("non-member carries tree state", v);
            }
            continue;
        }
        ++members;
        std::size_t steps = 0;
        for (NodeId x = v; x != root_; x = parent_[x]) {
            if (x == kNoNode || !in_tree_[x]) fail("parent chain leaves the tree", v);
            if (++steps > graph_->node_count()) fail("parent cycle", v);
        }
        if (v != root_) {
            const NodeId p = parent_[v];
            auto w = graph_->edge_weight(p, v);
            if (!w || *w != parent_weight_[v]) fail("tree edge not in graph", v);
            if (cost_[v] != cost_[p] + *w) fail("cost recurrence broken", v);
        }
        std::uint32_t outside = 0;
        for (const Edge& e : graph_->neighbors(v)) outside += in_tree_[e.to] ? 0 : 1;
        if (outside != outside_[v]) fail("stale outside-neighbor count", v);
        if ((outside > 0) != expandable(v)) fail("frontier membership wrong", v);
        if (expandable(v) && frontier_[frontier_pos_[v]] != v) fail("frontier index corrupt", v);
        for (NodeId c = first_child_[v]; c != kNoNode; c = next_sibling_[c]) {
            if (parent_[c] != v) fail("child list disagrees with parent link", c);
        }
    }
    if (members != order_.size()) fail("member count mismatch", root_);
    if (dirty != dirty_count_) fail("dirty count mismatch", root_);
}

}  // namespace imomd
