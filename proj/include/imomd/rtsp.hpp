#pragma once

// Relaxed traveling-salesman solver over a destination graph: fixed source
// and target, every required destination visited at least once, revisits
// allowed. Pipeline: Dijkstra seed -> enhanced cheapest insertion ->
// refinement -> genetic refinement.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "imomd/graph.hpp"

namespace imomd::rtsp {

using DestIndex = std::size_t;
using Rng = std::mt19937_64;

/// Symmetric destination-to-destination costs; kInfinity marks a missing edge.
class DestGraph {
public:
    DestGraph() = default;
    /// All off-diagonal entries start absent and every destination required.
    DestGraph(std::size_t n, DestIndex source, DestIndex target);

    std::size_t size() const noexcept { return n_; }
    DestIndex source() const noexcept { return source_; }
    DestIndex target() const noexcept { return target_; }

    double theta(DestIndex i, DestIndex k) const { return theta_[i * n_ + k]; }
    bool connected(DestIndex i, DestIndex k) const { return theta(i, k) < kInfinity; }
    void set(DestIndex i, DestIndex k, double w);

    bool required(DestIndex i) const { return required_[i]; }
    void set_required(DestIndex i, bool required);

    /// Throws InputError on broken matrix invariants and NoSequenceError when
    /// a required destination is unreachable from the source.
    void validate() const;

private:
    std::size_t n_ = 0;
    DestIndex source_ = 0;
    DestIndex target_ = 0;
    std::vector<double> theta_;
    std::vector<bool> required_;
};

struct VisitSequence {
    std::vector<DestIndex> order;
    double total_cost = kInfinity;

    friend bool operator==(const VisitSequence&, const VisitSequence&) = default;
};

/// Left-to-right sum of theta over consecutive pairs; kInfinity if any is absent.
double sequence_cost(const DestGraph& dg, std::span<const DestIndex> order);
VisitSequence make_sequence(const DestGraph& dg, std::vector<DestIndex> order);

/// Describes the first broken VisitSequence invariant, or nullopt when valid.
std::optional<std::string> check_sequence(const DestGraph& dg, const VisitSequence& seq);

/// Declaration order is the tie-break order for equal-delta candidates.
enum class InsertionAction { kInSequence, kInPlace, kSwapLeft, kSwapRight, kSwapBoth };
inline constexpr InsertionAction kAllActions[] = {
    InsertionAction::kInSequence, InsertionAction::kInPlace, InsertionAction::kSwapLeft,
    InsertionAction::kSwapRight, InsertionAction::kSwapBoth};

const char* to_string(InsertionAction a) noexcept;

struct InsertionPlan {
    InsertionAction action = InsertionAction::kInSequence;
    std::size_t anchor = 0;  // position of s_i in the sequence
    DestIndex destination = 0;
    double delta_cost = kInfinity;
};

/// Shortest source->target route over the destination graph.
VisitSequence initial_sequence(const DestGraph& dg);

/**
 * Cost change of inserting `d` around position `anchor` with `action`.
 * nullopt when the anchor is illegal for the action or the formula touches
 * a missing edge.
 */
std::optional<double> insertion_cost(const DestGraph& dg, std::span<const DestIndex> order,
                                     std::size_t anchor, DestIndex d, InsertionAction action);

std::vector<DestIndex> apply_insertion(std::span<const DestIndex> order, const InsertionPlan& plan);

/// Cheapest legal (action, anchor) for `d`. Throws NoInsertionError if none.
InsertionPlan best_insertion(const DestGraph& dg, const VisitSequence& seq, DestIndex d);

/// Drops revisits whose bypass edge exists and is no more expensive.
VisitSequence refine(const DestGraph& dg, VisitSequence seq);

/// Enhanced cheapest insertion from the Dijkstra seed, followed by refine.
VisitSequence eci(const DestGraph& dg);
VisitSequence eci_from(const DestGraph& dg, VisitSequence seed);

struct GaConfig {
    std::size_t mutation_count = 2000;
    std::size_t crossover_count = 2000;
    std::size_t generations = 10;
    std::size_t min_segments = 3;
    std::size_t max_segments = 7;
    std::size_t retry_budget = 20;
    std::uint64_t rng_seed = 0;
};

/// Cut into k segments, flip and shuffle the interior ones. Returns the
/// parent unchanged when no valid offspring turns up within the retry budget.
VisitSequence mutate(const DestGraph& dg, const VisitSequence& parent, const GaConfig& cfg, Rng& rng);

/// Places a (possibly reversed) slice of `a` into a child filled in the order
/// of `b`. Throws InternalError when the parents disagree on endpoints.
VisitSequence crossover(const DestGraph& dg, const VisitSequence& a, const VisitSequence& b,
                        Rng& rng, std::size_t retry_budget = 20);

/// Pick probability proportional to 1 / cost.
std::vector<double> selection_probabilities(std::span<const double> costs);

VisitSequence ga(const DestGraph& dg, const VisitSequence& seed, const GaConfig& cfg);

struct SolveStages {
    VisitSequence initial;
    VisitSequence eci;
    VisitSequence final_sequence;
};

SolveStages solve_stages(const DestGraph& dg, const GaConfig& cfg = {});
VisitSequence solve(const DestGraph& dg, const GaConfig& cfg = {});

}  // namespace imomd::rtsp
