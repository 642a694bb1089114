#include "imomd/planner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "imomd/errors.hpp"

namespace imomd {

void PlannerConfig::validate() const {
    if (!(goal_bias >= 0.0 && goal_bias <= 1.0)) throw InputError("goal_bias must lie in [0, 1]");
    if (!(time_budget > 0.0)) throw InputError("time budget must be positive");
    if (max_iterations == 0) throw InputError("max_iterations must be at least 1");
    if (solver.mutation_count == 0 || solver.crossover_count == 0 || solver.generations == 0) {
        throw InputError("solver counts must be at least 1");
    }
}

DistanceMatrix::DistanceMatrix(std::size_t n)
    : n_(n), cost_(n * n, kInfinity), node_(n * n, kNoNode) {
    for (std::size_t i = 0; i < n; ++i) cost_[i * n + i] = 0.0;
}

bool DistanceMatrix::offer(std::size_t i, std::size_t k, double cost, NodeId node) {
    if (i == k || !(cost < cost_[i * n_ + k])) return false;
    cost_[i * n_ + k] = cost_[k * n_ + i] = cost;
    node_[i * n_ + k] = node_[k * n_ + i] = node;
    return true;
}

bool destinations_connected(const DistanceMatrix& a, const std::vector<bool>& required) {
    const std::size_t n = a.size();
    DisjointSet ds(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1; k < n; ++k) {
            if (a.at(i, k) < kInfinity) ds.unite(i, k);
        }
    }
    std::optional<std::size_t> root;
    for (std::size_t i = 0; i < n; ++i) {
        if (!required[i]) continue;
        if (!root) {
            root = ds.find(i);
        } else if (ds.find(i) != *root) {
            return false;
        }
    }
    return true;
}

std::optional<std::string> validate_solution(const RoutingGraph& g, const DestinationSet& dests,
                                             const AnytimeSolution& sol) {
    const auto& p = sol.node_path;
    if (p.empty()) return "empty node path";
    for (NodeId v : p) {
        if (!g.contains(v)) return "node " + std::to_string(v) + " outside graph";
    }
    if (p.front() != dests.node(dests.source_index())) return "path does not start at the source";
    if (p.back() != dests.node(dests.target_index())) return "path does not end at the target";
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        auto w = g.edge_weight(p[i], p[i + 1]);
        if (!w) {
            return "nodes " + std::to_string(p[i]) + " and " + std::to_string(p[i + 1]) + " not adjacent";
        }
        total += *w;
    }
    if (std::abs(total - sol.total_cost) > 1e-9 * std::max(1.0, total)) {
        return "total_cost " + std::to_string(sol.total_cost) + " but edges sum to " + std::to_string(total);
    }
    std::vector<NodeId> sorted(p);
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < dests.size(); ++i) {
        if (dests.required(i) && !std::binary_search(sorted.begin(), sorted.end(), dests.node(i))) {
            return "required destination " + std::to_string(i) + " not on path";
        }
    }
    return std::nullopt;
}

NodeId sample(const PlannerConfig& cfg, const RoutingGraph& g, const DestinationSet& dests,
              PlannerRng& rng) {
    if (std::bernoulli_distribution(cfg.goal_bias)(rng)) {
        return dests.node(std::uniform_int_distribution<std::size_t>(0, dests.size() - 1)(rng));
    }
    return static_cast<NodeId>(std::uniform_int_distribution<std::size_t>(0, g.node_count() - 1)(rng));
}

Planner::Planner(const RoutingGraph& graph, DestinationSet dests, PlannerConfig cfg)
    : graph_(&graph),
      dests_(std::move(dests)),
      cfg_(cfg),
      matrix_(dests_.size()),
      rng_(cfg.rng_seed),
      required_(dests_.required_mask()),
      start_(std::chrono::steady_clock::now()) {
    cfg_.validate();
    dests_.validate(graph);
    trees_.reserve(dests_.size());
    for (std::size_t i = 0; i < dests_.size(); ++i) trees_.emplace_back(graph, i, dests_.node(i));
}

std::size_t Planner::explored_nodes() const noexcept {
    std::size_t total = 0;
    for (const auto& t : trees_) total += t.size();
    return total;
}

bool Planner::active(std::size_t i) const {
    return !trees_[i].saturated() || trees_[i].dirty_count() > 0;
}

bool Planner::converged() const {
    for (std::size_t i = 0; i < trees_.size(); ++i) {
        if (active(i)) return false;
    }
    return true;
}

std::optional<std::size_t> Planner::select_tree() {
    const std::size_t n = trees_.size();
    if (cfg_.tree_selection == TreeSelection::kUniformRandom) {
        std::vector<std::size_t> live;
        for (std::size_t i = 0; i < n; ++i) {
            if (active(i)) live.push_back(i);
        }
        if (live.empty()) return std::nullopt;
        return live[std::uniform_int_distribution<std::size_t>(0, live.size() - 1)(rng_)];
    }
    for (std::size_t step = 0; step < n; ++step) {
        const std::size_t i = (next_tree_ + step) % n;
        if (active(i)) {
            next_tree_ = (i + 1) % n;
            return i;
        }
    }
    return std::nullopt;
}

void Planner::update_connections(std::size_t owner, NodeId v) {
    const double own = trees_[owner].cost(v);
    for (std::size_t k = 0; k < trees_.size(); ++k) {
        if (k == owner || !trees_[k].contains(v)) continue;
        if (matrix_.offer(owner, k, own + trees_[k].cost(v), v)) matrix_improved_ = true;
    }
}

bool Planner::step() {
    const auto selected = select_tree();
    if (!selected) return false;
    ++iteration_;
    SearchTree& tree = trees_[*selected];
    const NodeId v_rand = sample(cfg_, *graph_, dests_, rng_);

    if (tree.contains(v_rand)) {
        // Refinement inside explored territory: relax neighbors through v_rand.
        for (NodeId d : tree.rewire(v_rand).decreased) update_connections(*selected, d);
    } else if (auto anchor = tree.nearest_expandable(v_rand)) {
        for (NodeId v : tree.extend(*anchor, v_rand)) {
            update_connections(*selected, v);
            for (NodeId d : tree.rewire(v).decreased) update_connections(*selected, d);
        }
    }
    maybe_solve();
    return true;
}

void Planner::maybe_solve() {
    if (!matrix_improved_) return;
    if (!ever_connected_) {
        if (!destinations_connected(matrix_, required_)) return;
        ever_connected_ = true;
    }
    matrix_improved_ = false;

    const std::size_t n = dests_.size();
    rtsp::DestGraph dg(n, dests_.source_index(), dests_.target_index());
    for (std::size_t i = 0; i < n; ++i) {
        dg.set_required(i, required_[i]);
        for (std::size_t k = i + 1; k < n; ++k) {
            if (matrix_.at(i, k) < kInfinity) dg.set(i, k, matrix_.at(i, k));
        }
    }
    rtsp::GaConfig ga = cfg_.solver;
    ga.rng_seed = cfg_.rng_seed + solve_count_;
    ++solve_count_;

    rtsp::VisitSequence order;
    try {
        order = rtsp::solve(dg, ga);
    } catch (const NoSequenceError&) {
        return;
    } catch (const NoInsertionError&) {
        return;
    }

    AnytimeSolution sol;
    sol.node_path = stitch(order);
    sol.visit_order = std::move(order);
    sol.total_cost = 0.0;
    for (std::size_t i = 0; i + 1 < sol.node_path.size(); ++i) {
        sol.total_cost += *graph_->edge_weight(sol.node_path[i], sol.node_path[i + 1]);
    }
    if (!trace_.empty() && !(sol.total_cost < trace_.back().total_cost)) return;
    sol.wall_time = elapsed();
    sol.iteration = iteration_;
    sol.explored_nodes = explored_nodes();
    trace_.push_back(sol);
    if (on_solution_) on_solution_(trace_.back());
}

std::vector<NodeId> Planner::stitch(const rtsp::VisitSequence& order) const {
    std::vector<NodeId> path;
    auto append = [&](NodeId v) {
        if (path.empty() || path.back() != v) path.push_back(v);
    };
    append(dests_.node(order.order.front()));
    for (std::size_t j = 0; j + 1 < order.order.size(); ++j) {
        const auto a = order.order[j];
        const auto b = order.order[j + 1];
        if (a == b) continue;
        const NodeId c = matrix_.connection(a, b);
        if (c == kNoNode) throw InternalError("visit order uses an unconnected destination pair");
        auto to_a = trees_[a].path_to_root(c);
        for (auto it = to_a.rbegin(); it != to_a.rend(); ++it) append(*it);
        for (NodeId v : trees_[b].path_to_root(c)) append(v);
    }
    return path;
}

double Planner::elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
}

PlanResult Planner::plan(Callback on_solution) {
    on_solution_ = std::move(on_solution);
    start_ = std::chrono::steady_clock::now();
    PlanResult result;
    for (;;) {
        if (iteration_ >= cfg_.max_iterations) {
            result.stop = StopReason::kIterationLimit;
            break;
        }
        if (elapsed() >= cfg_.time_budget) {
            result.stop = StopReason::kTimeBudget;
            break;
        }
        if (!step()) {
            result.stop = StopReason::kConverged;
            break;
        }
    }
    on_solution_ = {};
    result.trace = trace_;
    result.status = trace_.empty() ? PlanStatus::kNoPathYet : PlanStatus::kSolved;
    result.iterations = iteration_;
    result.explored_nodes = explored_nodes();
    result.wall_time = elapsed();
    return result;
}

std::vector<NodeId> Planner::connection_nodes(std::size_t i, std::size_t k) const {
    std::vector<NodeId> shared;
    for (NodeId v : trees_[i].nodes()) {
        if (trees_[k].contains(v)) shared.push_back(v);
    }
    return shared;
}

void Planner::validate() const {
    for (const auto& t : trees_) t.validate();
    const std::size_t n = trees_.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1; k < n; ++k) {
            double best = kInfinity;
            for (NodeId v : connection_nodes(i, k)) best = std::min(best, trees_[i].cost(v) + trees_[k].cost(v));
            const auto tag = "pair (" + std::to_string(i) + ", " + std::to_string(k) + ")";
            if (best != matrix_.at(i, k)) {
                throw InternalError(tag + ": matrix " + std::to_string(matrix_.at(i, k)) +
                                    " but fresh scan gives " + std::to_string(best));
            }
            if (best < kInfinity) {
                const NodeId c = matrix_.connection(i, k);
                if (!trees_[i].contains(c) || !trees_[k].contains(c) ||
                    trees_[i].cost(c) + trees_[k].cost(c) != best) {
                    throw InternalError(tag + ": cached connection node is stale");
                }
            }
        }
    }
}

}  // namespace imomd
