#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "imomd/errors.hpp"
#include "imomd/ingest.hpp"
#include "test_support.hpp"

namespace imomd::ingest {
namespace {

const std::filesystem::path kFixtures = IMOMD_FIXTURE_DIR;

constexpr std::string_view kTwoNodeOsm = R"(<?xml version="1.0"?>
<osm version="0.6">
  <node id="10" lat="47.6000000" lon="-122.3000000"/>
  <node id="11" lat="47.6010000" lon="-122.3010000"/>
  <node id="12" lat="47.6020000" lon="-122.3020000"/>
  <way id="900">
    <nd ref="10"/>
    <nd ref="11"/>
    <tag k="highway" v="residential"/>
  </way>
</osm>
)";

TEST(OsmParser, SingleHighwayWay) {
    auto m = parse_osm_xml(kTwoNodeOsm);
    ASSERT_EQ(m.graph.node_count(), 2u);
    EXPECT_EQ(m.graph.edge_count(), 1u);
    EXPECT_EQ(m.ids.to_external(0), 10);
    EXPECT_EQ(m.ids.to_external(1), 11);
    EXPECT_EQ(*m.graph.edge_weight(0, 1), haversine({47.6, -122.3}, {47.601, -122.301}));
}

TEST(OsmParser, WayWithoutHighwayTagIsDropped) {
    constexpr std::string_view xml = R"(<osm>
  <node id="1" lat="1" lon="1"/>
  <node id="2" lat="1.001" lon="1"/>
  <way id="5"><nd ref="1"/><nd ref="2"/><tag k="building" v="yes"/></way>
</osm>)";
    auto m = parse_osm_xml(xml);
    EXPECT_EQ(m.graph.node_count(), 0u);
    EXPECT_EQ(m.graph.edge_count(), 0u);
}

TEST(OsmParser, MalformedXmlReportsLine) {
    constexpr std::string_view xml = "<osm>\n  <node id=\"1\" lat=\"1\" lon=\"1\">\n</osm>\n";
    try {
        parse_osm_xml(xml);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_GT(e.line(), 0u);
        EXPECT_NE(std::string(e.what()).find("line"), std::string::npos);
    }
}

TEST(OsmParser, MissingNodeNamesTheWay) {
    constexpr std::string_view xml = R"(<osm>
  <node id="1" lat="1" lon="1"/>
  <way id="77"><nd ref="1"/><nd ref="2"/><tag k="highway" v="primary"/></way>
</osm>)";
    try {
        parse_osm_xml(xml);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("way 77"), std::string::npos) << e.what();
    }
}

TEST(OsmParser, HundredWayFixtureMatchesScriptCounts) {
    auto m = parse_osm_xml(read_file(kFixtures / "osm_100.osm"));
    std::ifstream counts(kFixtures / "osm_100.counts");
    std::string key;
    std::size_t nodes = 0, edges = 0;
    counts >> key >> nodes >> key >> edges;
    EXPECT_EQ(m.graph.node_count(), nodes);
    EXPECT_EQ(m.graph.edge_count(), edges);
    for (NodeId u = 0; u < m.graph.node_count(); ++u) {
        EXPECT_GT(m.graph.degree(u), 0u);
        for (const Edge& e : m.graph.neighbors(u)) {
            EXPECT_GT(e.weight, 0.0);
            EXPECT_EQ(m.graph.edge_weight(e.to, u), e.weight);
        }
    }
}

TEST(EdgeList, Triangle) {
    auto m = parse_edgelist("graph v1\nn 1 0 0\nn 2 0 0.001\nn 3 0.001 0\ne 1 2\ne 2 3 5.5\ne 3 1\n");
    EXPECT_EQ(m.graph.node_count(), 3u);
    EXPECT_EQ(m.graph.edge_count(), 3u);
    EXPECT_EQ(*m.graph.edge_weight(m.ids.to_node(2), m.ids.to_node(3)), 5.5);
}

TEST(EdgeList, CommentsAndBlankLines) {
    auto m = parse_edgelist("# fixture\n\ngraph v1  # header\nn 4 1 1\nn 5 1 1.01\n\ne 4 5 # haversine\n");
    EXPECT_EQ(m.graph.edge_count(), 1u);
}

TEST(EdgeList, RejectsNonPositiveWeights) {
    EXPECT_THROW(parse_edgelist("graph v1\nn 1 0 0\nn 2 0 1\ne 1 2 -1\n"), ParseError);
    EXPECT_THROW(parse_edgelist("graph v1\nn 1 0 0\nn 2 0 1\ne 1 2 0\n"), ParseError);
}

TEST(EdgeList, RejectsDanglingEndpoint) {
    try {
        parse_edgelist("graph v1\nn 1 0 0\ne 1 9\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_NE(std::string(e.what()).find("9"), std::string::npos);
    }
}

TEST(EdgeList, RejectsMalformedInput) {
    EXPECT_THROW(parse_edgelist("n 1 0 0\n"), ParseError);
    EXPECT_THROW(parse_edgelist(""), ParseError);
    EXPECT_THROW(parse_edgelist("graph v1\nn 1 0\n"), ParseError);
    EXPECT_THROW(parse_edgelist("graph v1\nn 1 0 0\nn 1 0 1\n"), ParseError);
    EXPECT_THROW(parse_edgelist("graph v1\nn 1 0 0\ne 1 1\n"), ParseError);
    EXPECT_THROW(parse_edgelist("graph v1\nx 1\n"), ParseError);
    EXPECT_THROW(parse_edgelist("graph v1\nn 1 95 0\n"), ParseError);
}

TEST(EdgeList, RoundTripPreservesRandomGraphs) {
    std::mt19937_64 rng(77);
    for (int round = 0; round < 10; ++round) {
        auto g = testing::random_graph(30, 0.2, rng, round % 2 == 0);
        IdMap ids;
        for (NodeId v = 0; v < g.node_count(); ++v) ids.insert(1000 + 3 * static_cast<ExternalId>(v));
        auto back = parse_edgelist(serialize_edgelist(g, ids));
        ASSERT_EQ(back.graph.node_count(), g.node_count());
        ASSERT_EQ(back.graph.edge_count(), g.edge_count());
        for (NodeId v = 0; v < g.node_count(); ++v) {
            const NodeId w = back.ids.to_node(ids.to_external(v));
            EXPECT_EQ(back.graph.point(w), g.point(v));
            auto a = g.neighbors(v);
            auto b = back.graph.neighbors(w);
            ASSERT_EQ(a.size(), b.size());
            for (std::size_t i = 0; i < a.size(); ++i) {
                EXPECT_EQ(back.ids.to_external(b[i].to), ids.to_external(a[i].to));
                EXPECT_EQ(b[i].weight, a[i].weight);
            }
        }
    }
}

TEST(Scenario, ParseAndSerializeRoundTrip) {
    auto s = parse_scenario("# demo\nsource 1\ntarget 9\nobjectives 3 4\nobjectives 5\npseudo 7 must_visit\npseudo 8\n");
    EXPECT_EQ(s.source, 1);
    EXPECT_EQ(s.target, 9);
    EXPECT_EQ(s.objectives, (std::vector<ExternalId>{3, 4, 5}));
    ASSERT_EQ(s.pseudo.size(), 2u);
    EXPECT_TRUE(s.pseudo[0].must_visit);
    EXPECT_FALSE(s.pseudo[1].must_visit);
    auto again = parse_scenario(serialize_scenario(s));
    EXPECT_EQ(again.objectives, s.objectives);
    EXPECT_EQ(again.pseudo.size(), 2u);
}

TEST(Scenario, RejectsMalformedInput) {
    EXPECT_THROW(parse_scenario("target 2\n"), ParseError);
    EXPECT_THROW(parse_scenario("source 1\n"), ParseError);
    EXPECT_THROW(parse_scenario("source 1\nsource 2\ntarget 3\n"), ParseError);
    EXPECT_THROW(parse_scenario("source x\ntarget 3\n"), ParseError);
    EXPECT_THROW(parse_scenario("source 1\ntarget 3\npseudo 4 maybe\n"), ParseError);
    EXPECT_THROW(parse_scenario("source 1\ntarget 3\nbogus 4\n"), ParseError);
}

IdMap ids_1_to(ExternalId n) {
    IdMap ids;
    for (ExternalId i = 1; i <= n; ++i) ids.insert(i);
    return ids;
}

TEST(Scenario, ResolveWithoutObjectives) {
    auto d = resolve_scenario(parse_scenario("source 1\ntarget 2\n"), ids_1_to(3));
    EXPECT_EQ(d.size(), 2u);
}

TEST(Scenario, DuplicateObjectiveRejected) {
    EXPECT_THROW(parse_scenario("source 1\ntarget 2\nobjectives 3 3\n"), ParseError);
    ScenarioSpec spec;
    spec.source = 1;
    spec.target = 2;
    spec.objectives = {3, 3};
    EXPECT_THROW(resolve_scenario(spec, ids_1_to(4)), InputError);
}

TEST(Scenario, UnknownIdIsNamed) {
    try {
        resolve_scenario(parse_scenario("source 1\ntarget 42\n"), ids_1_to(3));
        FAIL();
    } catch (const ResolutionError& e) {
        EXPECT_NE(std::string(e.what()).find("42"), std::string::npos);
    }
}

TEST(Scenario, TwentyFiveObjectivesGiveTwentySevenDestinations) {
    ScenarioSpec spec;
    spec.source = 1;
    spec.target = 2;
    for (ExternalId i = 0; i < 25; ++i) spec.objectives.push_back(10 + i);
    auto d = resolve_scenario(parse_scenario(serialize_scenario(spec)), ids_1_to(100));
    EXPECT_EQ(d.size(), 27u);
    EXPECT_EQ(d.objective_count(), 25u);
    EXPECT_EQ(d.node(0), 0u);
    EXPECT_EQ(d.node(26), 1u);
}

TEST(Scenario, PseudoDestinationsSitBeforeTarget) {
    auto d = resolve_scenario(parse_scenario("source 1\ntarget 2\nobjectives 3\npseudo 4\npseudo 5 must_visit\n"),
                              ids_1_to(6));
    ASSERT_EQ(d.size(), 5u);
    EXPECT_EQ(d[2].kind, DestinationKind::kPseudo);
    EXPECT_FALSE(d.required(2));
    EXPECT_TRUE(d.required(3));
    EXPECT_EQ(d[4].kind, DestinationKind::kTarget);
    EXPECT_THROW(resolve_scenario(parse_scenario("source 1\ntarget 2\npseudo 1\n"), ids_1_to(3)), InputError);
}

TEST(Files, LoaderPicksParserByExtension) {
    auto dir = std::filesystem::temp_directory_path() / "imomd_ingest_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream(dir / "m.osm") << kTwoNodeOsm;
        std::ofstream(dir / "m.el") << "graph v1\nn 1 0 0\nn 2 0 0.01\ne 1 2\n";
    }
    EXPECT_EQ(load_graph_file(dir / "m.osm").graph.node_count(), 2u);
    EXPECT_EQ(load_graph_file(dir / "m.el").graph.edge_count(), 1u);
    EXPECT_THROW(load_graph_file(dir / "missing.el"), InputError);
}

}  // namespace
}  // namespace imomd::ingest
