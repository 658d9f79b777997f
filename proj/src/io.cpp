#include "tollbooth/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tollbooth/decomposition.hpp"
#include "tollbooth/skeleton.hpp"

namespace toll {

using nlohmann::json;

namespace {

Rational rational_field(const json& value) {
    if (value.is_number_integer()) return Rational(value.get<long>());
    if (value.is_string()) {
        try {
            return parse_rational(value.get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what());
        }
    }
    throw ParseError("expected an integer or a \"p/q\" string");
}

const json& field(const json& object, const char* name) {
    if (!object.is_object() || !object.contains(name)) throw ParseError(std::string("missing field \"") + name + "\"");
    return object.at(name);
}

int int_field(const json& object, const char* name) {
    const json& v = field(object, name);
    if (!v.is_number_integer()) throw ParseError(std::string("field \"") + name + "\" must be an integer");
    return v.get<int>();
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace

RawInstance parse_instance(const std::string& text) {
    const json doc = parse_json(text);
    RawInstance raw;
    raw.vertices = int_field(doc, "vertices");
    const json& edges = field(doc, "edges");
    if (!edges.is_array()) throw ParseError("\"edges\" must be an array");
    for (const auto& e : edges) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
            throw ParseError("every edge must be a pair of integers");
        raw.edges.push_back({e[0].get<int>(), e[1].get<int>()});
    }
    if (doc.contains("buyers")) {
        const json& buyers = doc.at("buyers");
        if (!buyers.is_array()) throw ParseError("\"buyers\" must be an array");
        for (const auto& b : buyers) {
            Buyer buyer{int_field(b, "s"), int_field(b, "t"), rational_field(field(b, "budget"))};
            if (buyer.budget < 0) throw ParseError("budgets must be nonnegative");
            raw.buyers.push_back(buyer);
        }
    }
    return raw;
}

CactusInstance load_instance(const std::string& text) {
    RawInstance raw = parse_instance(text);
    CactusInstance inst{make_cactus(raw.vertices, raw.edges), raw.buyers};
    for (const auto& b : inst.buyers)
        if (b.s < 0 || b.t < 0 || b.s >= raw.vertices || b.t >= raw.vertices)
            throw std::invalid_argument("buyer endpoint out of range");
    return inst;
}

std::string write_instance(const CactusInstance& inst) {
    json doc;
    doc["vertices"] = inst.graph.vertex_count;
    doc["edges"] = json::array();
    for (const auto& [u, v] : inst.graph.edges) doc["edges"].push_back({u, v});
    doc["buyers"] = json::array();
    for (const auto& b : inst.buyers) doc["buyers"].push_back({{"s", b.s}, {"t", b.t}, {"budget", to_string(b.budget)}});
    return doc.dump(2) + "\n";
}

std::string write_solution(const CactusInstance& inst, const Solution& sol) {
    json doc;
    doc["prices"] = json::array();
    for (const auto& p : sol.prices) doc["prices"].push_back(to_string(p));
    doc["revenue"] = to_string(sol.revenue);
    doc["level"] = sol.winning_level;
    doc["subproblem"] = subproblem_name(sol.subproblem);
    doc["allocation"] = json::array();
    const Allocation alloc = allocate(inst.graph, sol.prices, inst.buyers);
    for (std::size_t i = 0; i < alloc.purchases.size(); ++i) {
        const Purchase& p = alloc.purchases[i];
        if (p.bought)
            doc["allocation"].push_back({{"buyer", i}, {"path", p.path}, {"paid", to_string(p.paid)}});
        else
            doc["allocation"].push_back({{"buyer", i}, {"buys", "nothing"}});
    }
    return doc.dump(2) + "\n";
}

SolutionRecord parse_solution(const std::string& text) {
    const json doc = parse_json(text);
    SolutionRecord rec;
    for (const auto& p : field(doc, "prices")) rec.prices.push_back(rational_field(p));
    rec.revenue = rational_field(field(doc, "revenue"));
    rec.level = int_field(doc, "level");
    rec.subproblem = field(doc, "subproblem").get<std::string>();
    for (const auto& a : field(doc, "allocation")) {
        Purchase p;
        if (a.contains("path")) {
            p.bought = true;
            p.path = a.at("path").get<std::vector<int>>();
            p.paid = rational_field(a.at("paid"));
        }
        rec.allocation.push_back(p);
    }
    return rec;
}

std::string inspect_json(const CactusInstance& inst) {
    const CactusGraph& g = inst.graph;
    json doc;
    doc["vertices"] = g.vertex_count;
    doc["edges"] = g.edge_count();
    if (g.edge_count() == 0) {
        doc["levels"] = json::array();
        return doc.dump(2) + "\n";
    }
    const BCTree t = build_bc_tree(g);
    const Decomposition d = build_decomposition(g, t);
    const BuyerLevels levels = assign_buyers(d, g, inst.buyers);
    doc["k"] = d.k;
    doc["L"] = d.L();
    doc["levels"] = json::array();
    for (int j = 1; j <= d.L(); ++j) {
        const Level& lv = d.level(j);
        const SkeletonLevel sk = build_skeleton(g, t, d, j);
        const SegmentSet segs = compress_segments(g, d, sk);
        json level;
        level["level"] = j;
        level["fragments"] = json::array();
        for (const auto& f : lv.fragments) {
            json frag;
            frag["edges"] = f;
            std::vector<int> borders;
            for (int v : vertices_of(g, f))
                if (std::binary_search(lv.border_vertices.begin(), lv.border_vertices.end(), v)) borders.push_back(v);
            frag["borders"] = borders;
            level["fragments"].push_back(frag);
        }
        level["buyers"] = levels.buyers_at_level[j - 1];
        level["skeleton_edges"] = sk.skeleton_edges;
        level["segments"] = json::array();
        for (const auto& s : segs.segments)
            level["segments"].push_back({{"edges", s.edges}, {"l", s.l}, {"r", s.r}, {"cyclic", s.cyclic},
                                         {"fragment", s.fragment}});
        doc["levels"].push_back(level);
    }
    return doc.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

}  // namespace toll
