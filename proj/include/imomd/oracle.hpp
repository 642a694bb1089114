#pragma once

// Exact reference answers for small destination graphs and the summary
// ratios used to score the heuristic solver against them.

#include <cstddef>
#include <optional>
#include <span>

#include "imomd/rtsp.hpp"

namespace imomd::rtsp {

/// Factorial guard for the exhaustive search.
inline constexpr std::size_t kOracleMaxOrder = 12;

struct OracleResult {
    double cost = kInfinity;
    /// Revisit-allowing witness over the original destination graph.
    VisitSequence witness;
};

/**
 * Optimal relaxed-TSP cost. Permutes the required intermediates over the
 * all-pairs shortest-path closure of theta, then expands the best order
 * back into direct hops. Throws InputError above kOracleMaxOrder and
 * NoSequenceError when a required destination is unreachable.
 */
OracleResult brute_force_oracle(const DestGraph& dg);

/// Cheapest path visiting every destination exactly once using only direct
/// edges; nullopt when no such path exists. Same size guard as the oracle.
std::optional<double> best_hamiltonian_path(const DestGraph& dg);

struct InstanceCosts {
    double oracle_cost = 0.0;
    double solver_cost = 0.0;
};

struct OracleStats {
    double rho_mean = 0.0;
    double rho_std = 0.0;
    double rho_optimality = 0.0;
    double rho_worst = 0.0;
};

/// Relative equality at 1e-9, used for "solver hit the optimum".
bool same_cost(double a, double b) noexcept;

/// rho_mean is sum(oracle) / sum(solver), rho_std the population standard
/// deviation of per-instance ratios, rho_worst their minimum.
/// Throws InputError on an empty batch.
OracleStats oracle_stats(std::span<const InstanceCosts> batch);

}  // namespace imomd::rtsp
