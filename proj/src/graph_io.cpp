#include "tdag/graph_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "tdag/errors.hpp"

namespace tdag {

namespace {

nlohmann::json edge_list(const std::vector<Edge>& edges) {
    auto arr = nlohmann::json::array();
    for (const Edge& e : edges) arr.push_back({e.from, e.to});
    return arr;
}

std::vector<Edge> read_edges(const nlohmann::json& j, const char* key) {
    std::vector<Edge> out;
    if (!j.contains(key)) return out;
    for (const auto& e : j.at(key)) {
        if (!e.is_array() || e.size() != 2) throw ParseError(std::string("malformed edge in \"") + key + "\"");
        out.push_back({e[0].get<int>(), e[1].get<int>()});
    }
    return out;
}

}  // namespace

nlohmann::json to_json(const Pdag& g, const TypeMap* types) {
    nlohmann::json j;
    j["d"] = g.vertex_count();
    if (types) {
        j["k"] = types->type_count();
        j["types"] = types->assignment();
    }
    j["directed"] = edge_list(g.directed_edges());
    j["undirected"] = edge_list(g.undirected_edges());
    return j;
}

nlohmann::json to_json(const TypedDag& tdag) { return to_json(Pdag(tdag.dag), &tdag.types); }

GraphDocument graph_from_json(const nlohmann::json& j) {
    try {
        const int d = j.at("d").get<int>();
        auto directed = read_edges(j, "directed");
        auto undirected = read_edges(j, "undirected");
        GraphDocument doc{Pdag(d, directed, undirected), std::nullopt};
        if (j.contains("types")) {
            auto assignment = j.at("types").get<std::vector<int>>();
            int k = 0;
            if (j.contains("k")) {
                k = j.at("k").get<int>();
            } else {
                for (int t : assignment) k = std::max(k, t + 1);
            }
            if (static_cast<int>(assignment.size()) != d) throw ValidationError("\"types\" length differs from \"d\"");
            doc.types = TypeMap(std::move(assignment), k);
        }
        return doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("graph JSON: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ValidationError(std::string("graph JSON: ") + e.what());
    }
}

GraphDocument read_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    return graph_from_json(j);
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

TypedDag typed_dag_from_document(const GraphDocument& doc) {
    if (!doc.types) throw ValidationError("graph has no type assignment");
    try {
        return TypedDag(doc.graph.to_dag(), *doc.types);
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    }
}

}  // namespace tdag
