#pragma once

// Brute-force reference implementations shared by the unit and acceptance
// tests. Written without the library's graph algorithms so they can check them.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "graph/mixed_graph.hpp"
#include "tabular/data_table.hpp"

namespace oracle {

using omicause::Mark;
using omicause::MixedGraph;

inline std::vector<std::string> names(int n, const char* prefix = "V") {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

// parent lists from the marks, read directly
inline std::vector<std::vector<int>> parent_lists(const MixedGraph& g) {
    std::vector<std::vector<int>> pa(static_cast<std::size_t>(g.size()));
    for (int a = 0; a < g.size(); ++a)
        for (int b = 0; b < g.size(); ++b)
            if (a != b && g.endpoint(a, b) == Mark::Arrow && g.endpoint(b, a) == Mark::Tail)
                pa[static_cast<std::size_t>(b)].push_back(a);
    return pa;
}

inline bool acyclic(const MixedGraph& g) {
    const auto pa = parent_lists(g);
    std::vector<int> state(static_cast<std::size_t>(g.size()), 0);
    std::function<bool(int)> visit = [&](int v) {
        auto& s = state[static_cast<std::size_t>(v)];
        if (s == 1) return false;
        if (s == 2) return true;
        s = 1;
        for (int p : pa[static_cast<std::size_t>(v)])
            if (!visit(p)) return false;
        s = 2;
        return true;
    };
    for (int v = 0; v < g.size(); ++v)
        if (!visit(v)) return false;
    return true;
}

inline bool is_ancestor(const MixedGraph& dag, int a, int b) {
    const auto pa = parent_lists(dag);
    std::vector<bool> seen(static_cast<std::size_t>(dag.size()), false);
    std::vector<int> stack{b};
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        if (v == a) return true;
        if (seen[static_cast<std::size_t>(v)]) continue;
        seen[static_cast<std::size_t>(v)] = true;
        for (int p : pa[static_cast<std::size_t>(v)]) stack.push_back(p);
    }
    return false;
}

// d-separation by moralizing the ancestral graph of {x, y} + z.
inline bool dsep_moral(const MixedGraph& dag, int x, int y, const std::vector<int>& z) {
    const int n = dag.size();
    const auto pa = parent_lists(dag);
    std::vector<bool> keep(static_cast<std::size_t>(n), false);
    std::vector<int> stack{x, y};
    stack.insert(stack.end(), z.begin(), z.end());
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        if (keep[static_cast<std::size_t>(v)]) continue;
        keep[static_cast<std::size_t>(v)] = true;
        for (int p : pa[static_cast<std::size_t>(v)]) stack.push_back(p);
    }
    std::vector<std::vector<bool>> adj(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n)));
    auto link = [&](int a, int b) {
        adj[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true;
        adj[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = true;
    };
    for (int v = 0; v < n; ++v) {
        if (!keep[static_cast<std::size_t>(v)]) continue;
        const auto& p = pa[static_cast<std::size_t>(v)];
        for (std::size_t i = 0; i < p.size(); ++i) {
            link(p[i], v);
            for (std::size_t j = i + 1; j < p.size(); ++j) link(p[i], p[j]);
        }
    }
    std::vector<bool> blocked(static_cast<std::size_t>(n), false);
    for (int v : z) blocked[static_cast<std::size_t>(v)] = true;
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    stack = {x};
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        if (v == y) return false;
        if (seen[static_cast<std::size_t>(v)]) continue;
        seen[static_cast<std::size_t>(v)] = true;
        for (int w = 0; w < n; ++w)
            if (keep[static_cast<std::size_t>(w)] && adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)] &&
                !blocked[static_cast<std::size_t>(w)])
                stack.push_back(w);
    }
    return true;
}

// All subsets of items, as bit masks over positions.
template <class Fn>
bool any_subset(const std::vector<int>& items, Fn&& fn) {
    const std::uint32_t total = 1u << items.size();
    for (std::uint32_t m = 0; m < total; ++m) {
        std::vector<int> s;
        for (std::size_t i = 0; i < items.size(); ++i)
            if (m & (1u << i)) s.push_back(items[i]);
        if (fn(s)) return true;
    }
    return false;
}

// Every DAG on n labelled nodes.
inline std::vector<MixedGraph> all_dags(int n) {
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
    std::vector<MixedGraph> out;
    std::size_t total = 1;
    for (std::size_t i = 0; i < pairs.size(); ++i) total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
        MixedGraph g(names(n));
        std::size_t c = code;
        for (auto [a, b] : pairs) {
            const auto s = c % 3;
            c /= 3;
            if (s == 1) g.add_directed(a, b);
            if (s == 2) g.add_directed(b, a);
        }
        if (acyclic(g)) out.push_back(std::move(g));
    }
    return out;
}

inline std::set<std::pair<int, int>> skeleton_of(const MixedGraph& g) {
    std::set<std::pair<int, int>> s;
    for (int a = 0; a < g.size(); ++a)
        for (int b = a + 1; b < g.size(); ++b)
            if (g.endpoint(a, b) != Mark::None) s.emplace(a, b);
    return s;
}

// Unshielded a -> b <- c, a < c.
inline std::set<std::tuple<int, int, int>> colliders_of(const MixedGraph& g) {
    const auto pa = parent_lists(g);
    std::set<std::tuple<int, int, int>> out;
    for (int b = 0; b < g.size(); ++b) {
        const auto& p = pa[static_cast<std::size_t>(b)];
        for (std::size_t i = 0; i < p.size(); ++i)
            for (std::size_t j = 0; j < p.size(); ++j)
                if (p[i] < p[j] && g.endpoint(p[i], p[j]) == Mark::None) out.emplace(p[i], b, p[j]);
    }
    return out;
}

// Parents, children and spouses.
inline std::set<int> markov_blanket(const MixedGraph& dag, int t) {
    const auto pa = parent_lists(dag);
    std::set<int> mb(pa[static_cast<std::size_t>(t)].begin(), pa[static_cast<std::size_t>(t)].end());
    for (int c = 0; c < dag.size(); ++c) {
        const auto& p = pa[static_cast<std::size_t>(c)];
        if (std::find(p.begin(), p.end(), t) == p.end()) continue;
        mb.insert(c);
        for (int s : p)
            if (s != t) mb.insert(s);
    }
    return mb;
}

// Maximal-ancestral-graph adjacency over the observed nodes: a and b are
// adjacent iff no subset of the other observed nodes d-separates them.
inline bool mag_adjacent(const MixedGraph& dag, const std::vector<int>& observed, int a, int b) {
    std::vector<int> others;
    for (int v : observed)
        if (v != a && v != b) others.push_back(v);
    return !any_subset(others, [&](const std::vector<int>& z) { return dsep_moral(dag, a, b, z); });
}

// Table helpers.
inline omicause::Column categorical(const std::string& name, const std::vector<std::int32_t>& codes, int card) {
    omicause::Column c;
    c.meta = {name, omicause::VariableKind::categorical(card), omicause::Family::Other};
    c.codes = codes;
    for (int i = 0; i < card; ++i) c.levels.push_back("s" + std::to_string(i));
    return c;
}

inline omicause::Column continuous(const std::string& name, const std::vector<double>& values) {
    omicause::Column c;
    c.meta = {name, omicause::VariableKind::continuous(), omicause::Family::Other};
    c.values = values;
    return c;
}

}  // namespace oracle
