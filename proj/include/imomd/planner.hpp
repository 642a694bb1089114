#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "imomd/destinations.hpp"
#include "imomd/graph.hpp"
#include "imomd/rtsp.hpp"
#include "imomd/search_tree.hpp"

namespace imomd {

enum class TreeSelection { kRoundRobin, kUniformRandom };

struct PlannerConfig {
    double goal_bias = 0.2;
    std::uint64_t rng_seed = 0;
    double time_budget = 10.0;  // seconds
    std::size_t max_iterations = std::numeric_limits<std::size_t>::max();
    TreeSelection tree_selection = TreeSelection::kRoundRobin;
    /// Ordering solver settings; its rng_seed is replaced per solve call.
    rtsp::GaConfig solver{400, 400, 5, 3, 7, 20, 0};

    /// Throws InputError when a field is out of range.
    void validate() const;
};

/// Best known inter-destination costs and the connection node realizing each.
class DistanceMatrix {
public:
    explicit DistanceMatrix(std::size_t n = 0);

    std::size_t size() const noexcept { return n_; }
    double at(std::size_t i, std::size_t k) const { return cost_[i * n_ + k]; }
    NodeId connection(std::size_t i, std::size_t k) const { return node_[i * n_ + k]; }

    /// Records `cost` via `node` when strictly cheaper; returns whether it was.
    bool offer(std::size_t i, std::size_t k, double cost, NodeId node);

private:
    std::size_t n_;
    std::vector<double> cost_;
    std::vector<NodeId> node_;
};

/// True when the finite entries of `a` join every required destination into
/// one component. Optional destinations may act as bridges.
bool destinations_connected(const DistanceMatrix& a, const std::vector<bool>& required);

struct AnytimeSolution {
    std::vector<NodeId> node_path;
    rtsp::VisitSequence visit_order;
    double total_cost = kInfinity;
    double wall_time = 0.0;
    std::size_t iteration = 0;
    std::size_t explored_nodes = 0;
};

/// Checks endpoints, adjacency, cost additivity and required coverage.
/// Returns a description of the first violation.
std::optional<std::string> validate_solution(const RoutingGraph& g, const DestinationSet& dests,
                                             const AnytimeSolution& sol);

enum class PlanStatus { kSolved, kNoPathYet };

enum class StopReason { kTimeBudget, kIterationLimit, kConverged };

struct PlanResult {
    PlanStatus status = PlanStatus::kNoPathYet;
    StopReason stop = StopReason::kTimeBudget;
    std::vector<AnytimeSolution> trace;
    std::size_t iterations = 0;
    std::size_t explored_nodes = 0;
    double wall_time = 0.0;

    const AnytimeSolution* best() const { return trace.empty() ? nullptr : &trace.back(); }
};

using PlannerRng = std::mt19937_64;

/// With probability goal_bias a uniformly chosen destination node, otherwise
/// a uniformly chosen graph node.
NodeId sample(const PlannerConfig& cfg, const RoutingGraph& g, const DestinationSet& dests,
              PlannerRng& rng);

/**
 * Multi-tree sampling planner. One SearchTree grows from every destination;
 * nodes shared by two trees connect their roots and feed the distance matrix,
 * which the relaxed-TSP solver orders whenever it improves.
 *
 * Single-threaded and deterministic for a fixed configuration as long as the
 * run is bounded by iterations or convergence rather than wall time.
 */
class Planner {
public:
    using Callback = std::function<void(const AnytimeSolution&)>;

    Planner(const RoutingGraph& graph, DestinationSet dests, PlannerConfig cfg);

    /// One iteration. Returns false once every tree is saturated and exact,
    /// at which point further steps cannot change anything.
    bool step();

    /// Iterates until the time budget, the iteration cap, or convergence.
    PlanResult plan(Callback on_solution = {});

    const RoutingGraph& graph() const noexcept { return *graph_; }
    const DestinationSet& destinations() const noexcept { return dests_; }
    const PlannerConfig& config() const noexcept { return cfg_; }
    const SearchTree& tree(std::size_t i) const { return trees_[i]; }
    std::size_t tree_count() const noexcept { return trees_.size(); }
    const DistanceMatrix& distances() const noexcept { return matrix_; }

    std::size_t iteration() const noexcept { return iteration_; }
    std::size_t solve_count() const noexcept { return solve_count_; }
    /// Distinct (tree, node) insertions so far.
    std::size_t explored_nodes() const noexcept;
    bool converged() const;
    const std::vector<AnytimeSolution>& trace() const noexcept { return trace_; }

    /// Nodes shared by trees i and k, found by scanning tree i.
    std::vector<NodeId> connection_nodes(std::size_t i, std::size_t k) const;

    /// Tree invariants plus agreement of the matrix with a fresh connection scan.
    void validate() const;

private:
    bool active(std::size_t i) const;
    std::optional<std::size_t> select_tree();
    void update_connections(std::size_t owner, NodeId v);
    void maybe_solve();
    std::vector<NodeId> stitch(const rtsp::VisitSequence& order) const;
    double elapsed() const;

    const RoutingGraph* graph_;
    DestinationSet dests_;
    PlannerConfig cfg_;
    std::vector<SearchTree> trees_;
    DistanceMatrix matrix_;
    PlannerRng rng_;
    std::vector<bool> required_;

    std::size_t iteration_ = 0;
    std::size_t next_tree_ = 0;
    std::size_t solve_count_ = 0;
    bool matrix_improved_ = false;
    bool ever_connected_ = false;

    std::vector<AnytimeSolution> trace_;
    Callback on_solution_;
    std::chrono::steady_clock::time_point start_;
};

}  // namespace imomd
