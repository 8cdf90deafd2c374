#include "graph/graph_io.hpp"

#include "util/error.hpp"

namespace omicause {

namespace {

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + '"';
}

const char* dot_arrow(Mark m) {
    switch (m) {
        case Mark::Arrow: return "normal";
        case Mark::Circle: return "odot";
        default: return "none";
    }
}

}  // namespace

std::string to_dot(const MixedGraph& g) {
    std::string out = "digraph G {\n";
    for (const auto& n : g.nodes()) out += "  " + quoted(n) + ";\n";
    for (const auto& e : g.edges()) {
        out += "  " + quoted(g.name(e.a)) + " -> " + quoted(g.name(e.b)) + " [dir=both, arrowtail=" +
               dot_arrow(e.mark_a) + ", arrowhead=" + dot_arrow(e.mark_b) + "];\n";
    }
    out += "}\n";
    return out;
}

nlohmann::ordered_json graph_to_json(const MixedGraph& g) {
    nlohmann::ordered_json j;
    j["nodes"] = g.nodes();
    j["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : g.edges()) {
        nlohmann::ordered_json je;
        je["a"] = g.name(e.a);
        je["b"] = g.name(e.b);
        je["mark_a"] = std::string(mark_name(e.mark_a));
        je["mark_b"] = std::string(mark_name(e.mark_b));
        j["edges"].push_back(std::move(je));
    }
    return j;
}

MixedGraph graph_from_json(const nlohmann::json& j) {
    try {
        MixedGraph g(j.at("nodes").get<std::vector<std::string>>());
        for (const auto& e : j.at("edges")) {
            const int a = g.index_of(e.at("a").get<std::string>());
            const int b = g.index_of(e.at("b").get<std::string>());
            if (g.adjacent(a, b)) throw InvalidArgument("duplicate edge " + g.name(a) + " - " + g.name(b));
            g.set_edge(a, b, mark_from_name(e.at("mark_a").get<std::string>()),
                       mark_from_name(e.at("mark_b").get<std::string>()));
        }
        return g;
    } catch (const nlohmann::json::exception& ex) {
        throw InvalidArgument(std::string("malformed graph JSON: ") + ex.what());
    }
}

}  // namespace omicause
