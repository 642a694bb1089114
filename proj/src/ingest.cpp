#include "imomd/ingest.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_set>

#include "imomd/errors.hpp"
#include "imomd/text.hpp"

namespace imomd::ingest {

namespace pt = boost::property_tree;

NodeId IdMap::insert(ExternalId ext) {
    auto [it, fresh] = internal_.emplace(ext, static_cast<NodeId>(external_.size()));
    if (fresh) external_.push_back(ext);
    return it->second;
}

NodeId IdMap::to_node(ExternalId ext) const {
    auto it = internal_.find(ext);
    if (it == internal_.end()) throw ResolutionError("unknown node id " + std::to_string(ext));
    return it->second;
}

namespace {

template <typename T>
T required_attr(const pt::ptree& element, const char* name, const char* what) {
    auto raw = element.get_optional<std::string>(pt::ptree::path_type(std::string("<xmlattr>.") + name));
    if (!raw) throw ParseError(std::string(what) + " element without '" + name + "' attribute");
    auto value = text::parse_number<T>(*raw);
    if (!value) throw ParseError(std::string(what) + " has malformed '" + name + "': " + *raw);
    return *value;
}

}  // namespace

LoadedGraph parse_osm_xml(std::string_view xml) {
    pt::ptree doc;
    std::istringstream in{std::string(xml)};
    try {
        pt::read_xml(in, doc);
    } catch (const pt::xml_parser_error& e) {
        throw ParseError("malformed OSM XML: " + e.message(), e.line());
    }

    struct RawNode {
        ExternalId id;
        GeoPoint p;
    };
    std::vector<RawNode> nodes;
    std::unordered_map<ExternalId, std::size_t> node_index;
    std::vector<std::pair<ExternalId, ExternalId>> segments;

    for (const auto& [root_name, root] : doc) {
        if (root_name == "<xmlcomment>") continue;
        for (const auto& [name, element] : root) {
            if (name == "node") {
                RawNode n{required_attr<ExternalId>(element, "id", "node"),
                          {required_attr<double>(element, "lat", "node"),
                           required_attr<double>(element, "lon", "node")}};
                if (!n.p.valid()) {
                    throw ParseError("node " + std::to_string(n.id) + " has invalid coordinates");
                }
                if (!node_index.emplace(n.id, nodes.size()).second) {
                    throw ParseError("node " + std::to_string(n.id) + " defined twice");
                }
                nodes.push_back(n);
            }
        }
        for (const auto& [name, element] : root) {
            if (name != "way") continue;
            const auto way_id = required_attr<ExternalId>(element, "id", "way");
            bool highway = false;
            std::vector<ExternalId> refs;
            for (const auto& [child_name, child] : element) {
                if (child_name == "nd") {
                    refs.push_back(required_attr<ExternalId>(child, "ref", "nd"));
                } else if (child_name == "tag") {
                    if (child.get<std::string>("<xmlattr>.k", "") == "highway") highway = true;
                }
            }
            if (!highway) continue;
            for (ExternalId r : refs) {
                if (!node_index.count(r)) {
                    throw ParseError("way " + std::to_string(way_id) + " references missing node " +
                                     std::to_string(r));
                }
            }
            for (std::size_t i = 0; i + 1 < refs.size(); ++i) {
                if (refs[i] != refs[i + 1]) segments.emplace_back(refs[i], refs[i + 1]);
            }
        }
    }

    std::unordered_set<ExternalId> used;
    for (auto [a, b] : segments) {
        used.insert(a);
        used.insert(b);
    }
    LoadedGraph out;
    RoutingGraph::Builder builder;
    for (const auto& n : nodes) {
        if (!used.count(n.id)) continue;
        out.ids.insert(n.id);
        builder.add_node(n.p);
    }
    for (auto [a, b] : segments) builder.add_edge(out.ids.to_node(a), out.ids.to_node(b));
    out.graph = std::move(builder).build();
    return out;
}

LoadedGraph parse_edgelist(std::string_view text_in) {
    LoadedGraph out;
    RoutingGraph::Builder builder;
    bool header = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text_in.size()) {
        auto eol = text_in.find('\n', pos);
        if (eol == std::string_view::npos) eol = text_in.size();
        auto line = text::strip_comment(text_in.substr(pos, eol - pos));
        pos = eol + 1;
        ++line_no;
        auto fields = text::split_ws(line);
        if (fields.empty()) continue;

        if (!header) {
            if (fields.size() != 2 || fields[0] != "graph" || fields[1] != "v1") {
                throw ParseError("expected header 'graph v1'", line_no);
            }
            header = true;
            continue;
        }
        if (fields[0] == "n") {
            if (fields.size() != 4) throw ParseError("node line needs: n <id> <lat> <lon>", line_no);
            auto id = text::parse_number<ExternalId>(fields[1]);
            auto lat = text::parse_number<double>(fields[2]);
            auto lon = text::parse_number<double>(fields[3]);
            if (!id || !lat || !lon) throw ParseError("malformed node line", line_no);
            if (out.ids.contains(*id)) {
                throw ParseError("node " + std::to_string(*id) + " defined twice", line_no);
            }
            GeoPoint p{*lat, *lon};
            if (!p.valid()) throw ParseError("invalid coordinates", line_no);
            out.ids.insert(*id);
            builder.add_node(p);
        } else if (fields[0] == "e") {
            if (fields.size() != 3 && fields.size() != 4) {
                throw ParseError("edge line needs: e <id> <id> [weight]", line_no);
            }
            auto a = text::parse_number<ExternalId>(fields[1]);
            auto b = text::parse_number<ExternalId>(fields[2]);
            if (!a || !b) throw ParseError("malformed edge line", line_no);
            for (auto ext : {*a, *b}) {
                if (!out.ids.contains(ext)) {
                    throw ParseError("edge references undeclared node " + std::to_string(ext),
                                     line_no);
                }
            }
            std::optional<double> w;
            if (fields.size() == 4) {
                w = text::parse_number<double>(fields[3]);
                if (!w) throw ParseError("malformed weight", line_no);
                if (!(*w > 0.0) || !std::isfinite(*w)) {
                    throw ParseError("edge weight must be positive and finite", line_no);
                }
            }
            if (*a == *b) throw ParseError("self-loop on node " + std::to_string(*a), line_no);
            builder.add_edge(out.ids.to_node(*a), out.ids.to_node(*b), w);
        } else {
            throw ParseError("unknown record '" + std::string(fields[0]) + "'", line_no);
        }
    }
    if (!header) throw ParseError("missing 'graph v1' header");
    out.graph = std::move(builder).build();
    return out;
}

std::string serialize_edgelist(const RoutingGraph& g, const IdMap& ids) {
    std::string out = "graph v1\n";
    for (NodeId v = 0; v < g.node_count(); ++v) {
        out += "n " + std::to_string(ids.to_external(v)) + " " +
               text::format_double(g.point(v).lat) + " " + text::format_double(g.point(v).lon) +
               "\n";
    }
    for (NodeId v = 0; v < g.node_count(); ++v) {
        for (const Edge& e : g.neighbors(v)) {
            if (e.to < v) continue;
            out += "e " + std::to_string(ids.to_external(v)) + " " +
                   std::to_string(ids.to_external(e.to)) + " " + text::format_double(e.weight) +
                   "\n";
        }
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

LoadedGraph load_graph_file(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    const auto ext = path.extension().string();
    try {
        if (ext == ".osm" || ext == ".xml") return parse_osm_xml(bytes);
        return parse_edgelist(bytes);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

ScenarioSpec parse_scenario(std::string_view text_in) {
    ScenarioSpec spec;
    bool have_source = false;
    bool have_target = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    auto parse_id = [&](std::string_view field) {
        auto id = text::parse_number<ExternalId>(field);
        if (!id) throw ParseError("malformed node id '" + std::string(field) + "'", line_no);
        return *id;
    };
    while (pos <= text_in.size()) {
        auto eol = text_in.find('\n', pos);
        if (eol == std::string_view::npos) eol = text_in.size();
        auto fields = text::split_ws(text::strip_comment(text_in.substr(pos, eol - pos)));
        pos = eol + 1;
        ++line_no;
        if (fields.empty()) continue;

        const auto key = fields[0];
        if (key == "source" || key == "target") {
            if (fields.size() != 2) throw ParseError(std::string(key) + " takes one id", line_no);
            auto& have = key == "source" ? have_source : have_target;
            if (have) throw ParseError(std::string(key) + " given twice", line_no);
            have = true;
            (key == "source" ? spec.source : spec.target) = parse_id(fields[1]);
        } else if (key == "objectives") {
            for (std::size_t i = 1; i < fields.size(); ++i) spec.objectives.push_back(parse_id(fields[i]));
        } else if (key == "pseudo") {
            if (fields.size() < 2 || fields.size() > 3 ||
                (fields.size() == 3 && fields[2] != "must_visit")) {
                throw ParseError("pseudo takes: pseudo <id> [must_visit]", line_no);
            }
            spec.pseudo.push_back({parse_id(fields[1]), fields.size() == 3});
        } else {
            throw ParseError("unknown scenario key '" + std::string(key) + "'", line_no);
        }
    }
    if (!have_source || !have_target) throw ParseError("scenario needs both source and target");
    if (spec.source == spec.target) throw ParseError("source and target must differ");
    std::unordered_set<ExternalId> seen;
    for (auto o : spec.objectives) {
        if (!seen.insert(o).second) throw ParseError("objective " + std::to_string(o) + " listed twice");
    }
    return spec;
}

std::string serialize_scenario(const ScenarioSpec& spec) {
    std::string out = "source " + std::to_string(spec.source) + "\n";
    out += "target " + std::to_string(spec.target) + "\n";
    if (!spec.objectives.empty()) {
        out += "objectives";
        for (auto o : spec.objectives) out += " " + std::to_string(o);
        out += "\n";
    }
    for (const auto& p : spec.pseudo) {
        out += "pseudo " + std::to_string(p.id) + (p.must_visit ? " must_visit" : "") + "\n";
    }
    return out;
}

ScenarioSpec load_scenario_file(const std::filesystem::path& path) {
    try {
        return parse_scenario(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

DestinationSet resolve_scenario(const ScenarioSpec& spec, const IdMap& ids) {
    std::vector<NodeId> objectives;
    objectives.reserve(spec.objectives.size());
    for (auto o : spec.objectives) objectives.push_back(ids.to_node(o));
    DestinationSet dests(ids.to_node(spec.source), objectives, ids.to_node(spec.target));
    if (spec.pseudo.empty()) return dests;
    std::vector<PseudoDestination> pseudo;
    for (const auto& p : spec.pseudo) pseudo.push_back({ids.to_node(p.id), p.must_visit});
    return add_pseudo_destinations(dests, pseudo);
}

}  // namespace imomd::ingest
