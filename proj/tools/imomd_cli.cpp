// imomd: run planners on a map, benchmark the ordering solver against the
// exact oracle, and generate synthetic maps.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>

#include <CLI11.hpp>

#include "imomd/errors.hpp"
#include "imomd/generators.hpp"
#include "imomd/ingest.hpp"
#include "imomd/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNoPathYet = 3;

namespace fs = std::filesystem;
using namespace imomd;

struct RunArgs {
    std::string graph;
    std::string scenario;
    std::string algo = "imomd";
    double budget = 10.0;
    std::uint64_t seed = 0;
    double goal_bias = 0.2;
    std::size_t max_iterations = 0;
    std::string out;
    std::string format = "jsonl";
};

struct BenchArgs {
    std::vector<std::size_t> orders{5, 6, 7, 8, 9};
    std::size_t instances = 300;
    std::uint64_t seed = 0;
    std::string kind = "complete";
    std::string out;
};

struct GenArgs {
    std::string prefix;
    gen::BugTrapSpec trap;
    gen::GeometricSpec geo;
};

// Opens --out or falls back to stdout.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (path.empty()) return;
        file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
        if (!*file_) throw InputError("cannot write " + path);
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

void write_text(const fs::path& path, const std::string& body) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << body;
}

int cmd_run(const RunArgs& a) {
    report::RunOptions opts;
    opts.algo = *report::parse_algorithm(a.algo);
    opts.budget = a.budget;
    opts.seed = a.seed;
    opts.goal_bias = a.goal_bias;
    if (a.max_iterations > 0) opts.max_iterations = a.max_iterations;

    const auto graph_bytes = ingest::read_file(a.graph);
    const auto scenario_bytes = ingest::read_file(a.scenario);
    const auto map = ingest::load_graph_file(a.graph);
    const auto scenario = ingest::load_scenario_file(a.scenario);

    Sink sink(a.out);
    report::ReportWriter writer(sink.stream(), a.format == "csv" ? report::ReportWriter::Format::kCsv
                                                                  : report::ReportWriter::Format::kJsonl);
    writer.config(opts, a.graph, a.scenario, report::fnv1a(graph_bytes), report::fnv1a(scenario_bytes));
    const auto summary = report::run(map, scenario, opts, [&](const report::TraceRow& r) { writer.row(r); });
    writer.summary(summary);
    if (!summary.solved) {
        std::cerr << "no path found within the budget (" << summary.explored_nodes << " nodes explored)\n";
        return kExitNoPathYet;
    }
    return kExitOk;
}

int cmd_bench(const BenchArgs& a) {
    for (auto order : a.orders) {
        if (order > rtsp::kOracleMaxOrder) {
            std::cerr << "error: order " << order << " exceeds the oracle limit of " << rtsp::kOracleMaxOrder
                      << '\n';
            return kExitUsage;
        }
        if (order < 2) {
            std::cerr << "error: order must be at least 2\n";
            return kExitUsage;
        }
    }
    std::vector<report::InstanceKind> kinds;
    if (a.kind != "incomplete") kinds.push_back(report::InstanceKind::kComplete);
    if (a.kind != "complete") kinds.push_back(report::InstanceKind::kIncomplete);

    Sink sink(a.out);
    auto& out = sink.stream();
    out << report::kBenchHeader << '\n';
    for (auto kind : kinds) {
        for (auto order : a.orders) {
            rtsp::GaConfig ga;
            ga.rng_seed = a.seed;
            const auto rows = report::run_oracle_batch(kind, order, a.instances, a.seed, ga);
            report::write_bench_csv(out, rows);
        }
    }
    return kExitOk;
}

void write_generated(const gen::GeneratedMap& m, const std::string& prefix) {
    write_text(prefix + ".el", ingest::serialize_edgelist(m.map.graph, m.map.ids));
    write_text(prefix + ".scenario.txt", ingest::serialize_scenario(m.scenario));
    if (m.informed) write_text(prefix + ".informed.scenario.txt", ingest::serialize_scenario(*m.informed));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-destination route planning on road graphs"};
    app.require_subcommand(1);

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Plan a route for a scenario and stream the anytime trace");
    run_cmd->add_option("--graph", run.graph, "Edge-list file, or OSM XML when the name ends in .osm/.xml")
        ->required()
        ->check(CLI::ExistingFile);
    run_cmd->add_option("--scenario", run.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--algo", run.algo, "Planner")->check(CLI::IsMember({"imomd", "biastar", "anastar"}));
    run_cmd->add_option("--budget", run.budget, "Time budget in seconds")->check(CLI::PositiveNumber);
    run_cmd->add_option("--seed", run.seed, "Random seed");
    run_cmd->add_option("--goal-bias", run.goal_bias, "Probability of sampling a destination")
        ->check(CLI::Range(0.0, 1.0));
    run_cmd->add_option("--max-iterations", run.max_iterations, "Iteration cap for the sampling planner (0 = none)");
    run_cmd->add_option("--out", run.out, "Output file (default stdout)");
    run_cmd->add_option("--format", run.format, "Trace format")->check(CLI::IsMember({"jsonl", "csv"}));

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench-oracle", "Score the ordering solver against the exact oracle");
    bench_cmd->add_option("--orders", bench.orders, "Destination counts to test")->expected(1, -1);
    bench_cmd->add_option("--instances", bench.instances, "Instances per order and kind")
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--seed", bench.seed, "Random seed");
    bench_cmd->add_option("--kind", bench.kind, "Instance family")
        ->check(CLI::IsMember({"complete", "incomplete", "both"}));
    bench_cmd->add_option("--out", bench.out, "Output CSV (default stdout)");

    GenArgs gen_args;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic map and scenario");
    gen_cmd->require_subcommand(1);
    auto* trap_cmd = gen_cmd->add_subcommand("bugtrap", "Chamber with a single entry, target outside");
    trap_cmd->add_option("--prefix", gen_args.prefix, "Output path prefix")->required();
    trap_cmd->add_option("--chamber", gen_args.trap.chamber, "Chamber side in nodes");
    trap_cmd->add_option("--corridor", gen_args.trap.corridor, "Corridor length in nodes");
    trap_cmd->add_option("--entry-width", gen_args.trap.entry_width, "Wall nodes adjacent to the entry");
    trap_cmd->add_option("--outside", gen_args.trap.outside, "Outside grid width (0 = chamber)");
    trap_cmd->add_flag("--water-gap", gen_args.trap.water_gap, "Two regions joined by one bridge edge");
    auto* geo_cmd = gen_cmd->add_subcommand("geometric", "Random geometric graph");
    geo_cmd->add_option("--prefix", gen_args.prefix, "Output path prefix")->required();
    geo_cmd->add_option("--nodes", gen_args.geo.nodes, "Node count");
    geo_cmd->add_option("--radius", gen_args.geo.radius, "Connection radius in unit-square coordinates");
    geo_cmd->add_option("--seed", gen_args.geo.seed, "Random seed");
    geo_cmd->add_option("--objectives", gen_args.geo.objectives, "Objectives in the scenario");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*run_cmd) return cmd_run(run);
        if (*bench_cmd) return cmd_bench(bench);
        if (*trap_cmd) {
            write_generated(gen::bug_trap(gen_args.trap), gen_args.prefix);
            return kExitOk;
        }
        if (*geo_cmd) {
            write_generated(gen::geometric_graph(gen_args.geo), gen_args.prefix);
            return kExitOk;
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ResolutionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}
