#pragma once

// Synthetic inputs: random destination graphs for the solver benchmarks and
// road-like maps (bug traps, random geometric graphs) for the planners.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "imomd/ingest.hpp"
#include "imomd/rtsp.hpp"

namespace imomd::gen {

/// Points uniform in a 1000 m square; every pair joined by its Euclidean length.
/// Destination 0 is the source and n - 1 the target.
rtsp::DestGraph random_complete_instance(std::size_t n, std::mt19937_64& rng);

/// Same point model, but only a random spanning tree plus each remaining pair
/// with probability `extra_edge_probability`.
rtsp::DestGraph random_incomplete_instance(std::size_t n, std::mt19937_64& rng,
                                           double extra_edge_probability = 0.4);

struct GeneratedMap {
    ingest::LoadedGraph map;
    ingest::ScenarioSpec scenario;
    /// Same scenario plus a pseudo-destination at the trap entry.
    std::optional<ingest::ScenarioSpec> informed;
    /// Per node: 0 inside the trap, 1 outside region, 2 connecting road.
    std::vector<std::uint8_t> region;
    NodeId entry = kNoNode;
};

struct BugTrapSpec {
    std::size_t chamber = 20;     // chamber is chamber x chamber grid nodes
    std::size_t corridor = 5;     // nodes between entry and the wrap-around road
    std::size_t entry_width = 1;  // chamber wall nodes touching the entry node
    std::size_t outside = 0;      // width of the outside grid; 0 means chamber
    std::size_t gap = 3;          // empty columns between chamber and outside grid
    bool water_gap = false;
};

/**
 * Chamber grid with a single entry node on its left wall. A corridor leads
 * from the entry to a road that wraps over the chamber to an outside grid on
 * the right. The source sits inside the chamber near its right wall, facing
 * the target in the outside grid, so goal-directed growth hits the wall.
 *
 * The water-gap variant drops the corridor and road: two grids joined by one
 * bridge edge, with the entry at the chamber end of the bridge.
 *
 * Throws InputError on degenerate sizes.
 */
GeneratedMap bug_trap(const BugTrapSpec& spec);

struct GeometricSpec {
    std::size_t nodes = 100;
    double radius = 0.15;  // in unit-square coordinates
    std::uint64_t seed = 7;
    std::size_t objectives = 0;
};

/// Random geometric graph in a small lat/lon box. Components left over after
/// the radius rule are joined by their closest node pairs. Source, target and
/// objectives are distinct random nodes.
GeneratedMap geometric_graph(const GeometricSpec& spec);

}  // namespace imomd::gen
