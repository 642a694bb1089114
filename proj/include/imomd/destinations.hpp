#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "imomd/graph.hpp"

namespace imomd {

enum class DestinationKind { kSource, kObjective, kPseudo, kTarget };

struct Destination {
    NodeId node = kNoNode;
    DestinationKind kind = DestinationKind::kObjective;
    /// Optional pseudo-destinations may be skipped by the final route.
    bool required = true;
};

struct PseudoDestination {
    NodeId node = kNoNode;
    bool must_visit = false;
};

/**
 * Destinations indexed as [source, objectives..., pseudo..., target].
 *
 * The index of a destination is also the index of its search tree and of its
 * row in the distance matrix.
 */
class DestinationSet {
public:
    DestinationSet() = default;
    DestinationSet(NodeId source, std::span<const NodeId> objectives, NodeId target);

    std::size_t size() const noexcept { return items_.size(); }
    std::size_t source_index() const noexcept { return 0; }
    std::size_t target_index() const noexcept { return items_.size() - 1; }

    const Destination& operator[](std::size_t i) const { return items_[i]; }
    NodeId node(std::size_t i) const { return items_[i].node; }
    bool required(std::size_t i) const { return items_[i].required; }
    std::vector<bool> required_mask() const;
    std::span<const Destination> items() const noexcept { return items_; }

    std::size_t objective_count() const;
    std::size_t pseudo_count() const;

    /// Throws InputError unless every node is valid in g and no node repeats.
    void validate(const RoutingGraph& g) const;

private:
    friend DestinationSet add_pseudo_destinations(const DestinationSet&,
                                                  std::span<const PseudoDestination>);
    std::vector<Destination> items_;
};

/// Inserts pseudo-destinations just before the target. A pseudo equal to the
/// source or target is rejected.
DestinationSet add_pseudo_destinations(const DestinationSet& dests,
                                       std::span<const PseudoDestination> pseudo);

}  // namespace imomd
