#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "imomd/graph.hpp"

namespace imomd {

/**
 * One rooted spanning tree grown from a destination over the routing graph.
 *
 * Per-node state is stored densely (one slot per graph node). A node is
 * expandable while it is in the tree and still has a graph neighbor outside
 * it. A node is "dirty" while its cost has changed since its neighbors were
 * last relaxed through it; a saturated tree with no dirty nodes holds exact
 * shortest-path costs.
 */
class SearchTree {
public:
    SearchTree(const RoutingGraph& graph, std::size_t destination, NodeId root);

    std::size_t destination() const noexcept { return destination_; }
    NodeId root() const noexcept { return root_; }
    const RoutingGraph& graph() const noexcept { return *graph_; }

    bool contains(NodeId v) const { return in_tree_[v] != 0; }
    double cost(NodeId v) const { return cost_[v]; }
    NodeId parent(NodeId v) const { return parent_[v]; }
    std::size_t size() const noexcept { return order_.size(); }
    /// Tree nodes in insertion order.
    std::span<const NodeId> nodes() const noexcept { return order_; }

    std::span<const NodeId> frontier() const noexcept { return frontier_; }
    bool expandable(NodeId v) const { return frontier_pos_[v] != kAbsent; }
    bool saturated() const noexcept { return frontier_.empty(); }

    bool dirty(NodeId v) const { return dirty_[v] != 0; }
    std::size_t dirty_count() const noexcept { return dirty_count_; }

    /// Frontier node closest to `target` by haversine, smaller id on ties.
    std::optional<NodeId> nearest_expandable(NodeId target) const;

    /// In-tree neighbor minimizing cost + edge weight, smaller id on ties.
    /// Throws InternalError when `v` has no neighbor in the tree.
    NodeId choose_parent(NodeId v) const;

    /**
     * Grows the tree from `anchor` toward `target`: adds the outside neighbor
     * of `anchor` closest to `target`, then keeps following single-exit
     * corridors until a branch, a dead end, or `target` is reached. Returns the
     * added nodes in order; empty when `anchor` is not expandable.
     */
    std::vector<NodeId> extend(NodeId anchor, NodeId target);

    struct RewireResult {
        std::size_t rewired = 0;
        /// Every node whose cost dropped (rewired nodes and their subtrees).
        std::vector<NodeId> decreased;
    };

    /// Reparents in-tree neighbors of `v` through `v` when that is cheaper and
    /// pushes the decrease down their subtrees. Clears the dirty mark of `v`.
    RewireResult rewire(NodeId v);

    /// Walks parent links from `v` back to the root (v first, root last).
    std::vector<NodeId> path_to_root(NodeId v) const;

    /// Full structural check; throws InternalError describing the first violation.
    void validate() const;

private:
    static constexpr std::uint32_t kAbsent = 0xffffffffu;

    void insert(NodeId v, NodeId parent, double edge_weight);
    void link_child(NodeId parent, NodeId child);
    void unlink_child(NodeId child);
    void frontier_remove(NodeId v);
    void mark_dirty(NodeId v);

    const RoutingGraph* graph_;
    std::size_t destination_;
    NodeId root_;

    std::vector<std::uint8_t> in_tree_;
    std::vector<std::uint8_t> dirty_;
    std::vector<NodeId> parent_;
    std::vector<double> parent_weight_;
    std::vector<double> cost_;
    std::vector<std::uint32_t> outside_;  // neighbors not (yet) in the tree
    std::vector<NodeId> first_child_;
    std::vector<NodeId> next_sibling_;
    std::vector<NodeId> prev_sibling_;
    std::vector<NodeId> frontier_;
    std::vector<std::uint32_t> frontier_pos_;
    std::vector<NodeId> order_;
    std::size_t dirty_count_ = 0;
};

}  // namespace imomd
