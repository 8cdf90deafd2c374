#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace omicause {

enum class Mark : std::uint8_t { None = 0, Tail, Arrow, Circle };

std::string_view mark_name(Mark m);
Mark mark_from_name(std::string_view s);

struct Edge {
    int a = 0;
    int b = 0;
    Mark mark_a = Mark::Tail;
    Mark mark_b = Mark::Tail;
    friend bool operator==(const Edge&, const Edge&) = default;
};

// Node set plus at most one edge per unordered pair, each endpoint carrying its
// own mark. Covers DAGs, CPDAGs, PAGs and skeletons.
//
// endpoint(a, b) is the mark at b's end of the a-b edge, so a -> b has
// endpoint(a, b) == Arrow and endpoint(b, a) == Tail.
class MixedGraph {
public:
    MixedGraph() = default;
    explicit MixedGraph(std::vector<std::string> nodes);

    int size() const { return static_cast<int>(nodes_.size()); }
    const std::vector<std::string>& nodes() const { return nodes_; }
    const std::string& name(int i) const { return nodes_.at(static_cast<std::size_t>(i)); }
    std::optional<int> find(std::string_view name) const;
    int index_of(std::string_view name) const;  // throws InvalidArgument

    Mark endpoint(int a, int b) const { return marks_[idx(a, b)]; }
    bool adjacent(int a, int b) const { return a != b && marks_[idx(a, b)] != Mark::None; }
    bool is_directed(int a, int b) const {
        return endpoint(a, b) == Mark::Arrow && endpoint(b, a) == Mark::Tail;
    }
    bool is_undirected(int a, int b) const {
        return endpoint(a, b) == Mark::Tail && endpoint(b, a) == Mark::Tail;
    }
    bool is_bidirected(int a, int b) const {
        return endpoint(a, b) == Mark::Arrow && endpoint(b, a) == Mark::Arrow;
    }

    void set_edge(int a, int b, Mark at_a, Mark at_b);
    void set_endpoint(int a, int b, Mark at_b);  // edge must exist
    void add_directed(int from, int to) { set_edge(from, to, Mark::Tail, Mark::Arrow); }
    void add_undirected(int a, int b) { set_edge(a, b, Mark::Tail, Mark::Tail); }
    void remove_edge(int a, int b);

    std::vector<int> adjacents(int a) const;
    std::vector<int> parents(int b) const;    // x with x -> b
    std::vector<int> children(int a) const;   // x with a -> x
    std::vector<int> neighbors(int a) const;  // x with a - x

    // Canonically ordered (a < b, then by a, b).
    std::vector<Edge> edges() const;
    int num_edges() const;

    // Only Tail-Arrow edges and no directed cycle.
    bool is_dag() const;
    // Only Tail/Arrow marks (no bidirected edges) and the directed part acyclic.
    bool is_pdag() const;
    bool has_directed_cycle() const;
    // Topological order of the directed part; nullopt if cyclic.
    std::optional<std::vector<int>> topological_order() const;

    // Same nodes and adjacencies, every edge marked as given.
    MixedGraph skeleton(Mark m = Mark::Tail) const;

    // Graph restricted to the named nodes (in that order).
    MixedGraph induced(const std::vector<int>& keep) const;

    friend bool operator==(const MixedGraph&, const MixedGraph&) = default;

private:
    std::size_t idx(int a, int b) const {
        return static_cast<std::size_t>(a) * nodes_.size() + static_cast<std::size_t>(b);
    }
    void check(int a) const;

    std::vector<std::string> nodes_;
    std::vector<Mark> marks_;
};

// Ancestors of `of` (including the nodes themselves) along directed edges.
std::vector<bool> ancestors(const MixedGraph& g, const std::vector<int>& of);

// Throws GraphError unless g is a DAG.
void require_dag(const MixedGraph& g);

}  // namespace omicause
