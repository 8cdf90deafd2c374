#pragma once

#include <string>

#include <json.hpp>

#include "graph/mixed_graph.hpp"

namespace omicause {

// Graphviz text. Every edge is emitted once as "a" -> "b" with dir=both and
// arrowtail/arrowhead taken from the marks (tail: none, arrow: normal,
// circle: odot).
std::string to_dot(const MixedGraph& g);

// {"nodes": [...], "edges": [{"a", "b", "mark_a", "mark_b"}]}
nlohmann::ordered_json graph_to_json(const MixedGraph& g);
MixedGraph graph_from_json(const nlohmann::json& j);

}  // namespace omicause
