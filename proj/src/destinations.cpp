#include "imomd/destinations.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

#include "imomd/errors.hpp"

namespace imomd {

DestinationSet::DestinationSet(NodeId source, std::span<const NodeId> objectives, NodeId target) {
    if (source == target) throw InputError("source and target must differ");
    items_.push_back({source, DestinationKind::kSource, true});
    for (NodeId o : objectives) items_.push_back({o, DestinationKind::kObjective, true});
    items_.push_back({target, DestinationKind::kTarget, true});

    std::unordered_set<NodeId> seen;
    for (const auto& d : items_) {
        if (!seen.insert(d.node).second) {
            throw InputError("destination node " + std::to_string(d.node) + " listed twice");
        }
    }
}

std::vector<bool> DestinationSet::required_mask() const {
    std::vector<bool> mask(items_.size());
    for (std::size_t i = 0; i < items_.size(); ++i) mask[i] = items_[i].required;
    return mask;
}

std::size_t DestinationSet::objective_count() const {
    return static_cast<std::size_t>(std::count_if(items_.begin(), items_.end(), [](const auto& d) {
        return d.kind == DestinationKind::kObjective;
    }));
}

std::size_t DestinationSet::pseudo_count() const {
    return static_cast<std::size_t>(std::count_if(items_.begin(), items_.end(), [](const auto& d) {
        return d.kind == DestinationKind::kPseudo;
    }));
}

void DestinationSet::validate(const RoutingGraph& g) const {
    if (items_.size() < 2) throw InputError("destination set needs a source and a target");
    for (const auto& d : items_) {
        if (!g.contains(d.node)) {
            throw InputError("destination node " + std::to_string(d.node) + " not in graph");
        }
    }
}

DestinationSet add_pseudo_destinations(const DestinationSet& dests,
                                       std::span<const PseudoDestination> pseudo) {
    if (dests.size() < 2) throw InputError("destination set needs a source and a target");
    std::unordered_set<NodeId> seen;
    for (const auto& d : dests.items()) seen.insert(d.node);

    DestinationSet out = dests;
    auto target = out.items_.back();
    out.items_.pop_back();
    for (const auto& p : pseudo) {
        if (p.node == dests.node(dests.source_index()) ||
            p.node == dests.node(dests.target_index())) {
            throw InputError("pseudo-destination " + std::to_string(p.node) +
                             " coincides with the source or target");
        }
        if (!seen.insert(p.node).second) {
            throw InputError("pseudo-destination " + std::to_string(p.node) + " listed twice");
        }
        out.items_.push_back({p.node, DestinationKind::kPseudo, p.must_visit});
    }
    out.items_.push_back(target);
    return out;
}

}  // namespace imomd
