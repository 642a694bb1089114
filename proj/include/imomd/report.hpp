#pragma once

// Run and benchmark harness shared by the command-line tool and the tests:
// drives a planner over a loaded map, turns its improvements into trace
// records, and evaluates the ordering solver against the exact oracle.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imomd/ingest.hpp"
#include "imomd/oracle.hpp"
#include "imomd/planner.hpp"
#include "imomd/rtsp.hpp"

namespace imomd::report {

/// 64-bit FNV-1a, used to fingerprint input files in run reports.
std::uint64_t fnv1a(std::string_view bytes) noexcept;

// ---- planner runs ---------------------------------------------------------

enum class Algorithm { kImomd, kBiAstar, kAnaStar };
std::optional<Algorithm> parse_algorithm(std::string_view name);
const char* to_string(Algorithm a) noexcept;

struct RunOptions {
    Algorithm algo = Algorithm::kImomd;
    double budget = 10.0;  // seconds
    std::uint64_t seed = 0;
    double goal_bias = 0.2;
    std::size_t max_iterations = std::numeric_limits<std::size_t>::max();
};

struct TraceRow {
    double wall_time = 0.0;
    double total_cost = 0.0;
    std::size_t explored_nodes = 0;
    std::size_t iteration = 0;
    /// Destination nodes in visiting order, as external ids.
    std::vector<ingest::ExternalId> visit_order;
};

struct RunSummary {
    bool solved = false;
    double total_cost = kInfinity;
    std::size_t explored_nodes = 0;
    std::size_t iterations = 0;
    double wall_time = 0.0;
    std::vector<NodeId> node_path;
    std::vector<ingest::ExternalId> node_path_external;
};

/**
 * Runs one planner. IMOMD plans the full tour. The single-pair baselines
 * first take the visiting order from an IMOMD run with the same budget and
 * seed (falling back to scenario order when that run finds nothing), then
 * solve each consecutive leg and concatenate.
 *
 * `on_row` sees every trace row as it is produced.
 */
RunSummary run(const ingest::LoadedGraph& map, const ingest::ScenarioSpec& scenario,
               const RunOptions& opts, const std::function<void(const TraceRow&)>& on_row = {});

/// Streams config, trace and summary records in jsonl or csv.
class ReportWriter {
public:
    enum class Format { kJsonl, kCsv };

    ReportWriter(std::ostream& out, Format format);

    void config(const RunOptions& opts, std::string_view graph_path, std::string_view scenario_path,
                std::uint64_t graph_hash, std::uint64_t scenario_hash);
    void row(const TraceRow& r);
    void summary(const RunSummary& s);

private:
    std::ostream* out_;
    Format format_;
    std::uint64_t graph_hash_ = 0;
    std::uint64_t scenario_hash_ = 0;
};

// ---- oracle benchmark -----------------------------------------------------

enum class InstanceKind { kComplete, kIncomplete };
const char* to_string(InstanceKind k) noexcept;

/// Deterministic instance for (kind, order, index, seed).
rtsp::DestGraph bench_instance(InstanceKind kind, std::size_t order, std::size_t index,
                               std::uint64_t seed);

struct BenchRow {
    InstanceKind kind = InstanceKind::kComplete;
    std::size_t order = 0;
    std::size_t instance = 0;
    double oracle_cost = 0.0;
    double initial_cost = 0.0;
    double eci_cost = 0.0;
    double solver_cost = 0.0;
    /// No duplicate-free sequence exists at all.
    bool revisit_required = false;
    /// Every optimal sequence repeats some destination.
    bool optimum_needs_revisit = false;
    bool solver_has_duplicate = false;
    /// check_sequence message for the solver output, empty when valid.
    std::string solver_violation;
};

BenchRow evaluate_instance(InstanceKind kind, std::size_t order, std::size_t index,
                           std::uint64_t seed, const rtsp::GaConfig& ga);

/// Evaluates `count` instances; `parallel` spreads them across OpenMP threads.
/// Row order is by instance index either way.
std::vector<BenchRow> run_oracle_batch(InstanceKind kind, std::size_t order, std::size_t count,
                                       std::uint64_t seed, const rtsp::GaConfig& ga, bool parallel = true);

rtsp::OracleStats batch_stats(std::span<const BenchRow> rows);

inline constexpr std::string_view kBenchHeader =
    "record,kind,order,instance,oracle_cost,solver_cost,ratio,rho_mean,rho_std,rho_optimality,rho_worst";

/// Instance rows followed by one stats row for the batch.
void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows);

}  // namespace imomd::report
