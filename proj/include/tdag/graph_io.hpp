#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "tdag/graph.hpp"

namespace tdag {

/// A graph as exchanged on disk:
///   {"d": int, "k": int, "types": [int; d], "directed": [[u,v],...], "undirected": [[u,v],...]}
/// "k" and "types" are optional on read; a Dag is a Pdag with empty "undirected".
struct GraphDocument {
    Pdag graph;
    std::optional<TypeMap> types;
};

nlohmann::json to_json(const Pdag& g, const TypeMap* types = nullptr);
nlohmann::json to_json(const TypedDag& tdag);
GraphDocument graph_from_json(const nlohmann::json& j);

GraphDocument read_graph_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

/// Requires a fully directed acyclic graph with types.
TypedDag typed_dag_from_document(const GraphDocument& doc);

}  // namespace tdag
