#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "imomd/baselines.hpp"
#include "imomd/errors.hpp"
#include "imomd/generators.hpp"
#include "imomd/report.hpp"

namespace imomd::report {
namespace {

std::vector<std::vector<std::string>> csv_rows(const std::string& body) {
    std::vector<std::vector<std::string>> out;
    std::istringstream in(body);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (!line.empty() && line.back() == ',') fields.emplace_back();
        out.push_back(fields);
    }
    return out;
}

const rtsp::GaConfig kSmallGa{200, 200, 3, 3, 7, 20, 5};

TEST(Fnv1a, KnownVectors) {
    EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ull);
    EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cull);
    EXPECT_EQ(fnv1a("foobar"), 0x85944171f73967e8ull);
}

TEST(Algorithm, Names) {
    for (auto a : {Algorithm::kImomd, Algorithm::kBiAstar, Algorithm::kAnaStar}) {
        EXPECT_EQ(parse_algorithm(to_string(a)), a);
    }
    EXPECT_FALSE(parse_algorithm("dijkstra").has_value());
}

TEST(BenchCsv, StatsRowRecomputesFromInstanceRows) {
    auto rows = run_oracle_batch(InstanceKind::kComplete, 6, 10, 1, kSmallGa);
    std::ostringstream out;
    write_bench_csv(out, rows);
    auto table = csv_rows(out.str());
    ASSERT_EQ(table.size(), 11u);
    double sum_o = 0, sum_s = 0, worst = 1, hits = 0;
    std::vector<double> ratios;
    for (std::size_t i = 0; i < 10; ++i) {
        ASSERT_EQ(table[i][0], "instance");
        EXPECT_EQ(std::stoul(table[i][3]), i);
        const double o = std::stod(table[i][4]), s = std::stod(table[i][5]);
        sum_o += o;
        sum_s += s;
        ratios.push_back(o / s);
        worst = std::min(worst, o / s);
        hits += std::abs(o - s) <= 1e-9 * std::max(1.0, s);
        EXPECT_EQ(std::stod(table[i][6]), o / s);
    }
    double mean_ratio = 0;
    for (double r : ratios) mean_ratio += r / 10;
    double var = 0;
    for (double r : ratios) var += (r - mean_ratio) * (r - mean_ratio) / 10;

    const auto& st = table[10];
    ASSERT_EQ(st[0], "stats");
    EXPECT_NEAR(std::stod(st[7]), sum_o / sum_s, 1e-12);
    EXPECT_NEAR(std::stod(st[8]), std::sqrt(var), 1e-12);
    EXPECT_NEAR(std::stod(st[9]), hits / 10, 1e-12);
    EXPECT_NEAR(std::stod(st[10]), worst, 1e-12);
}

TEST(BenchCsv, HeaderMatchesRowWidth) {
    auto header = csv_rows(std::string(kBenchHeader))[0];
    auto rows = run_oracle_batch(InstanceKind::kIncomplete, 5, 3, 2, kSmallGa);
    std::ostringstream out;
    write_bench_csv(out, rows);
    for (const auto& r : csv_rows(out.str())) EXPECT_EQ(r.size(), header.size());
}

TEST(OracleBatch, ParallelMatchesSerial) {
    for (auto kind : {InstanceKind::kComplete, InstanceKind::kIncomplete}) {
        auto a = run_oracle_batch(kind, 7, 24, 9, kSmallGa, true);
        auto b = run_oracle_batch(kind, 7, 24, 9, kSmallGa, false);
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            EXPECT_EQ(a[i].oracle_cost, b[i].oracle_cost);
            EXPECT_EQ(a[i].solver_cost, b[i].solver_cost);
            EXPECT_EQ(a[i].eci_cost, b[i].eci_cost);
            EXPECT_EQ(a[i].revisit_required, b[i].revisit_required);
            EXPECT_TRUE(a[i].solver_violation.empty()) << a[i].solver_violation;
        }
    }
}

TEST(OracleBatch, RefusesLargeOrder) {
    EXPECT_THROW(run_oracle_batch(InstanceKind::kComplete, 13, 1, 0, kSmallGa), InputError);
}

TEST(OracleBatch, InstancesAreSeededPerIndex) {
    auto a = bench_instance(InstanceKind::kComplete, 6, 3, 11);
    auto b = bench_instance(InstanceKind::kComplete, 6, 3, 11);
    auto c = bench_instance(InstanceKind::kComplete, 6, 4, 11);
    EXPECT_EQ(a.theta(0, 5), b.theta(0, 5));
    EXPECT_NE(a.theta(0, 5), c.theta(0, 5));
}

struct Captured {
    std::vector<TraceRow> rows;
    RunSummary summary;
};

Captured capture(const gen::GeneratedMap& m, const RunOptions& opts) {
    Captured c;
    c.summary = run(m.map, m.scenario, opts, [&](const TraceRow& r) { c.rows.push_back(r); });
    return c;
}

gen::GeneratedMap small_map() { return gen::geometric_graph({150, 0.12, 4, 3}); }

TEST(Run, ImomdIsDeterministicUnderIterationCap) {
    auto m = small_map();
    RunOptions opts;
    opts.seed = 3;
    opts.max_iterations = 5000;
    auto a = capture(m, opts);
    auto b = capture(m, opts);
    ASSERT_TRUE(a.summary.solved);
    ASSERT_EQ(a.rows.size(), b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(a.rows[i].total_cost, b.rows[i].total_cost);
        EXPECT_EQ(a.rows[i].iteration, b.rows[i].iteration);
        EXPECT_EQ(a.rows[i].visit_order, b.rows[i].visit_order);
        if (i) EXPECT_LT(a.rows[i].total_cost, a.rows[i - 1].total_cost);
    }
    EXPECT_EQ(a.summary.node_path, b.summary.node_path);
    EXPECT_EQ(a.summary.total_cost, a.rows.back().total_cost);
    EXPECT_EQ(a.summary.node_path_external.front(), m.scenario.source);
    EXPECT_EQ(a.summary.node_path_external.back(), m.scenario.target);
}

TEST(Run, BaselinesCoverEveryObjective) {
    auto m = small_map();
    for (auto algo : {Algorithm::kBiAstar, Algorithm::kAnaStar}) {
        RunOptions opts;
        opts.algo = algo;
        opts.budget = 5.0;
        opts.max_iterations = 20000;
        auto c = capture(m, opts);
        ASSERT_TRUE(c.summary.solved);
        ASSERT_FALSE(c.rows.empty());
        if (algo == Algorithm::kBiAstar) EXPECT_EQ(c.rows.size(), 1u);
        for (std::size_t i = 1; i < c.rows.size(); ++i) EXPECT_LT(c.rows[i].total_cost, c.rows[i - 1].total_cost);
        EXPECT_NEAR(c.rows.back().total_cost, c.summary.total_cost, 1e-6 * c.summary.total_cost);
        EXPECT_EQ(baselines::path_cost(m.map.graph, c.summary.node_path), c.summary.total_cost);
        for (auto obj : m.scenario.objectives) {
            EXPECT_NE(std::find(c.summary.node_path_external.begin(), c.summary.node_path_external.end(), obj),
                      c.summary.node_path_external.end());
        }
    }
}

TEST(Writer, JsonlRecords) {
    auto m = small_map();
    RunOptions opts;
    opts.max_iterations = 3000;
    std::ostringstream out;
    ReportWriter w(out, ReportWriter::Format::kJsonl);
    w.config(opts, "g.el", "s.txt", fnv1a("g"), fnv1a("s"));
    auto s = run(m.map, m.scenario, opts, [&](const TraceRow& r) { w.row(r); });
    w.summary(s);

    std::istringstream in(out.str());
    std::string line;
    std::vector<nlohmann::json> recs;
    while (std::getline(in, line)) recs.push_back(nlohmann::json::parse(line));
    ASSERT_GE(recs.size(), 3u);
    EXPECT_EQ(recs.front()["record"], "config");
    EXPECT_EQ(recs.front()["max_iterations"], 3000);
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a("g")));
    EXPECT_EQ(recs.front()["graph_hash"], hash);
    EXPECT_EQ(recs.back()["record"], "summary");
    EXPECT_EQ(recs.back()["status"], "solved");
    for (std::size_t i = 1; i + 1 < recs.size(); ++i) EXPECT_EQ(recs[i]["record"], "trace");
}

TEST(Writer, CsvLayout) {
    auto m = small_map();
    RunOptions opts;
    opts.max_iterations = 3000;
    std::ostringstream out;
    ReportWriter w(out, ReportWriter::Format::kCsv);
    w.config(opts, "g.el", "s.txt", 1, 2);
    auto s = run(m.map, m.scenario, opts, [&](const TraceRow& r) { w.row(r); });
    w.summary(s);
    auto text = out.str();
    EXPECT_EQ(text.rfind("# algo=imomd\n", 0), 0u);
    EXPECT_NE(text.find("# graph_hash=0000000000000001\n"), std::string::npos);
    auto table = csv_rows(text);
    std::size_t header_at = 0;
    while (table[header_at][0].rfind("#", 0) == 0) ++header_at;
    const auto width = table[header_at].size();
    EXPECT_EQ(table[header_at][0], "record");
    for (std::size_t i = header_at + 1; i < table.size(); ++i) EXPECT_EQ(table[i].size(), width);
    EXPECT_EQ(table.back()[0], "summary");
}

}  // namespace
}  // namespace imomd::report
