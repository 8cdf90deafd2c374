#include "graph/mixed_graph.hpp"

#include <algorithm>
#include <queue>

#include "util/error.hpp"

namespace omicause {

std::string_view mark_name(Mark m) {
    switch (m) {
        case Mark::Tail: return "tail";
        case Mark::Arrow: return "arrow";
        case Mark::Circle: return "circle";
        case Mark::None: break;
    }
    return "none";
}

Mark mark_from_name(std::string_view s) {
    if (s == "tail") return Mark::Tail;
    if (s == "arrow") return Mark::Arrow;
    if (s == "circle") return Mark::Circle;
    throw InvalidArgument("unknown endpoint mark '" + std::string(s) + "'");
}

MixedGraph::MixedGraph(std::vector<std::string> nodes) : nodes_(std::move(nodes)) {
    std::vector<std::string> sorted = nodes_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw InvalidArgument("duplicate node names");
    marks_.assign(nodes_.size() * nodes_.size(), Mark::None);
}

std::optional<int> MixedGraph::find(std::string_view name) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (nodes_[i] == name) return static_cast<int>(i);
    return std::nullopt;
}

int MixedGraph::index_of(std::string_view name) const {
    auto i = find(name);
    if (!i) throw InvalidArgument("unknown node '" + std::string(name) + "'");
    return *i;
}

void MixedGraph::check(int a) const {
    if (a < 0 || a >= size()) throw InvalidArgument("node index " + std::to_string(a) + " out of range");
}

void MixedGraph::set_edge(int a, int b, Mark at_a, Mark at_b) {
    check(a);
    check(b);
    if (a == b) throw GraphError("self-loop on '" + name(a) + "'");
    if (at_a == Mark::None || at_b == Mark::None) throw InvalidArgument("edge endpoint cannot be None");
    marks_[idx(b, a)] = at_a;
    marks_[idx(a, b)] = at_b;
}

void MixedGraph::set_endpoint(int a, int b, Mark at_b) {
    if (!adjacent(a, b)) throw GraphError("no edge " + name(a) + " - " + name(b));
    if (at_b == Mark::None) throw InvalidArgument("edge endpoint cannot be None");
    marks_[idx(a, b)] = at_b;
}

void MixedGraph::remove_edge(int a, int b) {
    check(a);
    check(b);
    marks_[idx(a, b)] = Mark::None;
    marks_[idx(b, a)] = Mark::None;
}

std::vector<int> MixedGraph::adjacents(int a) const {
    std::vector<int> out;
    for (int x = 0; x < size(); ++x)
        if (adjacent(a, x)) out.push_back(x);
    return out;
}

std::vector<int> MixedGraph::parents(int b) const {
    std::vector<int> out;
    for (int x = 0; x < size(); ++x)
        if (x != b && is_directed(x, b)) out.push_back(x);
    return out;
}

std::vector<int> MixedGraph::children(int a) const {
    std::vector<int> out;
    for (int x = 0; x < size(); ++x)
        if (x != a && is_directed(a, x)) out.push_back(x);
    return out;
}

std::vector<int> MixedGraph::neighbors(int a) const {
    std::vector<int> out;
    for (int x = 0; x < size(); ++x)
        if (x != a && is_undirected(a, x)) out.push_back(x);
    return out;
}

std::vector<Edge> MixedGraph::edges() const {
    std::vector<Edge> out;
    for (int a = 0; a < size(); ++a)
        for (int b = a + 1; b < size(); ++b)
            if (adjacent(a, b)) out.push_back({a, b, endpoint(b, a), endpoint(a, b)});
    return out;
}

int MixedGraph::num_edges() const {
    int n = 0;
    for (int a = 0; a < size(); ++a)
        for (int b = a + 1; b < size(); ++b)
            if (adjacent(a, b)) ++n;
    return n;
}

std::optional<std::vector<int>> MixedGraph::topological_order() const {
    const int n = size();
    std::vector<int> indeg(static_cast<std::size_t>(n), 0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b && is_directed(a, b)) ++indeg[static_cast<std::size_t>(b)];
    // Lowest-index-first for a deterministic order.
    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (int v = 0; v < n; ++v)
        if (indeg[static_cast<std::size_t>(v)] == 0) ready.push(v);
    std::vector<int> order;
    while (!ready.empty()) {
        int v = ready.top();
        ready.pop();
        order.push_back(v);
        for (int c = 0; c < n; ++c)
            if (c != v && is_directed(v, c) && --indeg[static_cast<std::size_t>(c)] == 0) ready.push(c);
    }
    if (static_cast<int>(order.size()) != n) return std::nullopt;
    return order;
}

bool MixedGraph::has_directed_cycle() const { return !topological_order().has_value(); }

bool MixedGraph::is_dag() const {
    for (int a = 0; a < size(); ++a)
        for (int b = a + 1; b < size(); ++b)
            if (adjacent(a, b) && !is_directed(a, b) && !is_directed(b, a)) return false;
    return !has_directed_cycle();
}

bool MixedGraph::is_pdag() const {
    for (int a = 0; a < size(); ++a)
        for (int b = a + 1; b < size(); ++b)
            if (adjacent(a, b) && !is_directed(a, b) && !is_directed(b, a) && !is_undirected(a, b)) return false;
    return !has_directed_cycle();
}

MixedGraph MixedGraph::skeleton(Mark m) const {
    MixedGraph out(nodes_);
    for (const auto& e : edges()) out.set_edge(e.a, e.b, m, m);
    return out;
}

MixedGraph MixedGraph::induced(const std::vector<int>& keep) const {
    std::vector<std::string> names;
    for (int k : keep) names.push_back(name(k));
    MixedGraph out(std::move(names));
    for (std::size_t i = 0; i < keep.size(); ++i)
        for (std::size_t j = i + 1; j < keep.size(); ++j)
            if (adjacent(keep[i], keep[j]))
                out.set_edge(static_cast<int>(i), static_cast<int>(j), endpoint(keep[j], keep[i]),
                             endpoint(keep[i], keep[j]));
    return out;
}

std::vector<bool> ancestors(const MixedGraph& g, const std::vector<int>& of) {
    std::vector<bool> seen(static_cast<std::size_t>(g.size()), false);
    std::vector<int> stack;
    for (int v : of) {
        if (!seen[static_cast<std::size_t>(v)]) {
            seen[static_cast<std::size_t>(v)] = true;
            stack.push_back(v);
        }
    }
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int p : g.parents(v))
            if (!seen[static_cast<std::size_t>(p)]) {
                seen[static_cast<std::size_t>(p)] = true;
                stack.push_back(p);
            }
    }
    return seen;
}

void require_dag(const MixedGraph& g) {
    if (!g.is_dag()) throw GraphError("graph is not a DAG (non-directed edge or directed cycle)");
}

}  // namespace omicause
