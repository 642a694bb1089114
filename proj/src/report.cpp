#include "imomd/report.hpp"

#include <algorithm>
#include <cstdio>
#include <random>

#include <json.hpp>

#include "imomd/baselines.hpp"
#include "imomd/errors.hpp"
#include "imomd/generators.hpp"
#include "imomd/kernels.hpp"
#include "imomd/text.hpp"

namespace imomd::report {

std::uint64_t fnv1a(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
    if (name == "imomd") return Algorithm::kImomd;
    if (name == "biastar") return Algorithm::kBiAstar;
    if (name == "anastar") return Algorithm::kAnaStar;
    return std::nullopt;
}

const char* to_string(Algorithm a) noexcept {
    switch (a) {
        case Algorithm::kImomd: return "imomd";
        case Algorithm::kBiAstar: return "biastar";
        case Algorithm::kAnaStar: return "anastar";
    }
    return "?";
}

namespace {

std::string hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<ingest::ExternalId> external(const ingest::IdMap& ids, std::span<const NodeId> nodes) {
    std::vector<ingest::ExternalId> out;
    out.reserve(nodes.size());
    for (NodeId v : nodes) out.push_back(ids.to_external(v));
    return out;
}

PlannerConfig planner_config(const RunOptions& opts) {
    PlannerConfig cfg;
    cfg.goal_bias = opts.goal_bias;
    cfg.rng_seed = opts.seed;
    cfg.time_budget = opts.budget;
    cfg.max_iterations = opts.max_iterations;
    return cfg;
}

RunSummary run_imomd(const ingest::LoadedGraph& map, const DestinationSet& dests, const RunOptions& opts,
                     const std::function<void(const TraceRow&)>& on_row) {
    Planner planner(map.graph, dests, planner_config(opts));
    auto result = planner.plan([&](const AnytimeSolution& sol) {
        if (!on_row) return;
        std::vector<NodeId> stops;
        for (auto d : sol.visit_order.order) stops.push_back(dests.node(d));
        on_row({sol.wall_time, sol.total_cost, sol.explored_nodes, sol.iteration, external(map.ids, stops)});
    });
    RunSummary s;
    s.explored_nodes = result.explored_nodes;
    s.iterations = result.iterations;
    s.wall_time = result.wall_time;
    if (const auto* best = result.best()) {
        s.solved = true;
        s.total_cost = best->total_cost;
        s.node_path = best->node_path;
    }
    return s;
}

std::vector<NodeId> leg_stops(const ingest::LoadedGraph& map, const DestinationSet& dests,
                              const RunOptions& opts) {
    RunOptions probe = opts;
    probe.algo = Algorithm::kImomd;
    Planner planner(map.graph, dests, planner_config(probe));
    auto result = planner.plan();
    std::vector<NodeId> stops;
    if (const auto* best = result.best()) {
        for (auto d : best->visit_order.order) stops.push_back(dests.node(d));
    } else {
        for (std::size_t i = 0; i < dests.size(); ++i) {
            if (dests.required(i)) stops.push_back(dests.node(i));
        }
    }
    stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
    return stops;
}

void append_leg(std::vector<NodeId>& path, const std::vector<NodeId>& leg) {
    auto first = leg.begin();
    if (!path.empty() && first != leg.end() && *first == path.back()) ++first;
    path.insert(path.end(), first, leg.end());
}

RunSummary run_baseline(const ingest::LoadedGraph& map, const DestinationSet& dests, const RunOptions& opts,
                        const std::function<void(const TraceRow&)>& on_row) {
    const auto stops = leg_stops(map, dests, opts);
    const auto stops_ext = external(map.ids, stops);
    const std::size_t legs = stops.size() - 1;

    RunSummary s;
    double settled_cost = 0.0;
    bool ok = true;
    for (std::size_t j = 0; j < legs && ok; ++j) {
        baselines::BaselineResult r;
        if (opts.algo == Algorithm::kBiAstar) {
            r = baselines::bidirectional_astar(map.graph, stops[j], stops[j + 1]);
        } else {
            r = baselines::anastar(map.graph, stops[j], stops[j + 1], opts.budget / static_cast<double>(legs));
        }
        if (r.status != baselines::BaselineStatus::kSolved) {
            ok = false;
        } else {
            // Only the final leg's improvements change the tour once every
            // earlier leg is settled, so those are the tour's trace rows.
            if (opts.algo == Algorithm::kAnaStar && j + 1 == legs && on_row) {
                for (const auto& tp : r.trace) {
                    on_row({s.wall_time + tp.wall_time, settled_cost + tp.cost,
                            s.explored_nodes + r.explored_nodes, 0, stops_ext});
                }
            }
            settled_cost += r.cost;
            append_leg(s.node_path, r.node_path);
        }
        s.explored_nodes += r.explored_nodes;
        s.wall_time += r.wall_time;
    }
    if (!ok) {
        s.node_path.clear();
        return s;
    }
    s.solved = true;
    s.total_cost = baselines::path_cost(map.graph, s.node_path);
    if (opts.algo == Algorithm::kBiAstar && on_row) {
        on_row({s.wall_time, s.total_cost, s.explored_nodes, 0, stops_ext});
    }
    return s;
}

}  // namespace

RunSummary run(const ingest::LoadedGraph& map, const ingest::ScenarioSpec& scenario,
               const RunOptions& opts, const std::function<void(const TraceRow&)>& on_row) {
    const DestinationSet dests = ingest::resolve_scenario(scenario, map.ids);
    RunSummary s = opts.algo == Algorithm::kImomd ? run_imomd(map, dests, opts, on_row)
                                                  : run_baseline(map, dests, opts, on_row);
    s.node_path_external = external(map.ids, s.node_path);
    return s;
}

ReportWriter::ReportWriter(std::ostream& out, Format format) : out_(&out), format_(format) {}

void ReportWriter::config(const RunOptions& opts, std::string_view graph_path,
                          std::string_view scenario_path, std::uint64_t graph_hash,
                          std::uint64_t scenario_hash) {
    graph_hash_ = graph_hash;
    scenario_hash_ = scenario_hash;
    nlohmann::ordered_json j;
    j["record"] = "config";
    j["algo"] = to_string(opts.algo);
    j["budget"] = opts.budget;
    j["seed"] = opts.seed;
    j["goal_bias"] = opts.goal_bias;
    if (opts.max_iterations != std::numeric_limits<std::size_t>::max()) {
        j["max_iterations"] = opts.max_iterations;
    } else {
        j["max_iterations"] = nullptr;
    }
    j["graph"] = graph_path;
    j["scenario"] = scenario_path;
    j["graph_hash"] = hex(graph_hash);
    j["scenario_hash"] = hex(scenario_hash);
    if (format_ == Format::kJsonl) {
        *out_ << j.dump() << '\n';
        return;
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() == "record") continue;
        *out_ << "# " << it.key() << '=' << (it->is_string() ? it->get<std::string>() : it->dump()) << '\n';
    }
    *out_ << "record,wall_time,total_cost,explored_nodes,iteration,visit_order,status,node_path\n";
}

namespace {

template <typename T>
std::string join(const std::vector<T>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(xs[i]);
    }
    return out;
}

}  // namespace

void ReportWriter::row(const TraceRow& r) {
    if (format_ == Format::kJsonl) {
        nlohmann::ordered_json j;
        j["record"] = "trace";
        j["wall_time"] = r.wall_time;
        j["total_cost"] = r.total_cost;
        j["explored_nodes"] = r.explored_nodes;
        j["iteration"] = r.iteration;
        j["visit_order"] = r.visit_order;
        *out_ << j.dump() << '\n';
    } else {
        *out_ << "trace," << text::format_double(r.wall_time) << ',' << text::format_double(r.total_cost) << ','
              << r.explored_nodes << ',' << r.iteration << ',' << join(r.visit_order) << ",,\n";
    }
    out_->flush();
}

void ReportWriter::summary(const RunSummary& s) {
    const char* status = s.solved ? "solved" : "no_path_yet";
    if (format_ == Format::kJsonl) {
        nlohmann::ordered_json j;
        j["record"] = "summary";
        j["status"] = status;
        if (s.solved) {
            j["total_cost"] = s.total_cost;
        } else {
            j["total_cost"] = nullptr;
        }
        j["explored_nodes"] = s.explored_nodes;
        j["iterations"] = s.iterations;
        j["wall_time"] = s.wall_time;
        j["node_path"] = s.node_path_external;
        j["graph_hash"] = hex(graph_hash_);
        j["scenario_hash"] = hex(scenario_hash_);
        *out_ << j.dump() << '\n';
    } else {
        *out_ << "summary," << text::format_double(s.wall_time) << ','
              << (s.solved ? text::format_double(s.total_cost) : std::string()) << ',' << s.explored_nodes << ','
              << s.iterations << ",," << status << ',' << join(s.node_path_external) << '\n';
    }
    out_->flush();
}

const char* to_string(InstanceKind k) noexcept {
    return k == InstanceKind::kComplete ? "complete" : "incomplete";
}

rtsp::DestGraph bench_instance(InstanceKind kind, std::size_t order, std::size_t index, std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(kind), static_cast<std::uint32_t>(order),
                      static_cast<std::uint32_t>(index)};
    std::mt19937_64 rng(seq);
    return kind == InstanceKind::kComplete ? gen::random_complete_instance(order, rng)
                                           : gen::random_incomplete_instance(order, rng);
}

BenchRow evaluate_instance(InstanceKind kind, std::size_t order, std::size_t index, std::uint64_t seed,
                           const rtsp::GaConfig& ga) {
    const auto dg = bench_instance(kind, order, index, seed);
    rtsp::GaConfig cfg = ga;
    cfg.rng_seed = ga.rng_seed + index;
    const auto stages = rtsp::solve_stages(dg, cfg);
    const auto oracle = rtsp::brute_force_oracle(dg);
    const auto hamiltonian = rtsp::best_hamiltonian_path(dg);

    BenchRow row;
    row.kind = kind;
    row.order = order;
    row.instance = index;
    row.oracle_cost = oracle.cost;
    row.initial_cost = stages.initial.total_cost;
    row.eci_cost = stages.eci.total_cost;
    row.solver_cost = stages.final_sequence.total_cost;
    row.revisit_required = !hamiltonian.has_value();
    row.optimum_needs_revisit = !hamiltonian || !rtsp::same_cost(*hamiltonian, oracle.cost);
    auto sorted = stages.final_sequence.order;
    std::sort(sorted.begin(), sorted.end());
    row.solver_has_duplicate = std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
    if (auto bad = rtsp::check_sequence(dg, stages.final_sequence)) row.solver_violation = *bad;
    return row;
}

std::vector<BenchRow> run_oracle_batch(InstanceKind kind, std::size_t order, std::size_t count,
                                       std::uint64_t seed, const rtsp::GaConfig& ga, bool parallel) {
    if (order > rtsp::kOracleMaxOrder) {
        throw InputError("order " + std::to_string(order) + " exceeds the oracle limit of " +
                         std::to_string(rtsp::kOracleMaxOrder));
    }
    std::vector<BenchRow> rows(count);
    std::vector<std::string> errors(count);
    auto body = [&](std::size_t i) {
        try {
            rows[i] = evaluate_instance(kind, order, i, seed, ga);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    };
    if (parallel) {
        kernels::parallel::for_each_index(count, body);
    } else {
        kernels::serial::for_each_index(count, body);
    }
    for (std::size_t i = 0; i < count; ++i) {
        if (!errors[i].empty()) throw InternalError("instance " + std::to_string(i) + ": " + errors[i]);
    }
    return rows;
}

rtsp::OracleStats batch_stats(std::span<const BenchRow> rows) {
    std::vector<rtsp::InstanceCosts> costs;
    costs.reserve(rows.size());
    for (const auto& r : rows) costs.push_back({r.oracle_cost, r.solver_cost});
    return rtsp::oracle_stats(costs);
}

void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows) {
    using text::format_double;
    for (const auto& r : rows) {
        out << "instance," << to_string(r.kind) << ',' << r.order << ',' << r.instance << ','
            << format_double(r.oracle_cost) << ',' << format_double(r.solver_cost) << ','
            << format_double(r.oracle_cost / r.solver_cost) << ",,,,\n";
    }
    if (rows.empty()) return;
    const auto s = batch_stats(rows);
    out << "stats," << to_string(rows.front().kind) << ',' << rows.front().order << ",,,,,"
        << format_double(s.rho_mean) << ',' << format_double(s.rho_std) << ','
        << format_double(s.rho_optimality) << ',' << format_double(s.rho_worst) << '\n';
}

}  // namespace imomd::report
