#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "imomd/destinations.hpp"
#include "imomd/graph.hpp"

namespace imomd::ingest {

using ExternalId = std::int64_t;

/// Bijection between external node ids and dense NodeIds.
class IdMap {
public:
    NodeId insert(ExternalId ext);

    bool contains(ExternalId ext) const { return internal_.count(ext) != 0; }
    /// Throws ResolutionError naming the id when it is unknown.
    NodeId to_node(ExternalId ext) const;
    ExternalId to_external(NodeId v) const { return external_.at(v); }
    std::size_t size() const noexcept { return external_.size(); }

private:
    std::vector<ExternalId> external_;
    std::unordered_map<ExternalId, NodeId> internal_;
};

struct LoadedGraph {
    RoutingGraph graph;
    IdMap ids;
};

/**
 * Reads the road subset of an OSM XML document.
 *
 * Every way carrying a `highway` tag contributes one undirected edge per
 * consecutive pair of node refs, weighted by haversine length. Nodes touched
 * by no retained edge are dropped. NodeIds follow document order of the
 * retained `node` elements.
 */
LoadedGraph parse_osm_xml(std::string_view xml);

/// Line format: `graph v1`, then `n <id> <lat> <lon>` and `e <id> <id> [meters]`.
LoadedGraph parse_edgelist(std::string_view text);
std::string serialize_edgelist(const RoutingGraph& g, const IdMap& ids);

/// Chooses the parser from the extension (`.osm`/`.xml` vs anything else).
LoadedGraph load_graph_file(const std::filesystem::path& path);

struct PseudoSpec {
    ExternalId id = 0;
    bool must_visit = false;
};

struct ScenarioSpec {
    ExternalId source = 0;
    ExternalId target = 0;
    std::vector<ExternalId> objectives;
    std::vector<PseudoSpec> pseudo;
};

/**
 * Scenario text, one key per line:
 *
 *     source 17
 *     target 42
 *     objectives 3 9 11
 *     pseudo 25 must_visit
 *
 * `objectives` may repeat (values accumulate); `pseudo` takes one id per line.
 */
ScenarioSpec parse_scenario(std::string_view text);
std::string serialize_scenario(const ScenarioSpec& spec);
ScenarioSpec load_scenario_file(const std::filesystem::path& path);

DestinationSet resolve_scenario(const ScenarioSpec& spec, const IdMap& ids);

std::string read_file(const std::filesystem::path& path);

}  // namespace imomd::ingest
