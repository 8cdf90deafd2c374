#include "graph/orientation.hpp"

#include <algorithm>
#include <tuple>

#include "util/error.hpp"

namespace omicause {

void SepSetMap::set(int a, int b, std::vector<int> sepset) {
    if (a == b) throw InvalidArgument("sepset for identical nodes");
    std::sort(sepset.begin(), sepset.end());
    map_[key(a, b)] = std::move(sepset);
}

const std::vector<int>& SepSetMap::get(int a, int b) const {
    auto it = map_.find(key(a, b));
    if (it == map_.end())
        throw InvalidArgument("no sepset recorded for pair (" + std::to_string(a) + ", " + std::to_string(b) + ")");
    return it->second;
}

bool SepSetMap::separates_with(int a, int b, int v) const {
    const auto& s = get(a, b);
    return std::binary_search(s.begin(), s.end(), v);
}

OrientationResult orient_v_structures(const MixedGraph& skeleton, const SepSetMap& sepsets, bool allow_bidirected) {
    const int n = skeleton.size();
    for (const auto& [pair, set] : sepsets.entries()) {
        const auto [a, b] = pair;
        if (a < 0 || b >= n) throw InvalidArgument("sepset references a node outside the graph");
        for (int v : set)
            if (v < 0 || v >= n) throw InvalidArgument("sepset references a node outside the graph");
        if (skeleton.adjacent(a, b))
            throw InvalidArgument("sepset recorded for adjacent pair " + skeleton.name(a) + " - " + skeleton.name(b));
    }

    OrientationResult out{skeleton, {}};
    MixedGraph& g = out.graph;
    for (int a = 0; a < n; ++a) {
        for (int c = a + 1; c < n; ++c) {
            if (skeleton.adjacent(a, c)) continue;
            for (int b = 0; b < n; ++b) {
                if (b == a || b == c || !skeleton.adjacent(a, b) || !skeleton.adjacent(c, b)) continue;
                if (!sepsets.contains(a, c))
                    throw InvalidArgument("sepset references a non-tested pair: " + skeleton.name(a) + ", " +
                                          skeleton.name(c));
                if (sepsets.separates_with(a, c, b)) continue;
                if (!allow_bidirected && (g.endpoint(b, a) == Mark::Arrow || g.endpoint(b, c) == Mark::Arrow)) {
                    out.warnings.push_back("conflicting collider " + g.name(a) + " -> " + g.name(b) + " <- " +
                                           g.name(c) + " skipped");
                    continue;
                }
                g.set_endpoint(a, b, Mark::Arrow);
                g.set_endpoint(c, b, Mark::Arrow);
            }
        }
    }
    return out;
}

namespace {

bool meek_r1(const MixedGraph& g, int a, int b) {
    for (int c = 0; c < g.size(); ++c)
        if (c != a && c != b && g.is_directed(c, a) && !g.adjacent(c, b)) return true;
    return false;
}

bool meek_r2(const MixedGraph& g, int a, int b) {
    for (int c = 0; c < g.size(); ++c)
        if (c != a && c != b && g.is_directed(a, c) && g.is_directed(c, b)) return true;
    return false;
}

bool meek_r3(const MixedGraph& g, int a, int b) {
    const int n = g.size();
    for (int c = 0; c < n; ++c) {
        if (c == a || c == b || !g.is_undirected(a, c) || !g.is_directed(c, b)) continue;
        for (int d = c + 1; d < n; ++d) {
            if (d == a || d == b || !g.is_undirected(a, d) || !g.is_directed(d, b)) continue;
            if (!g.adjacent(c, d)) return true;
        }
    }
    return false;
}

// a - b becomes a -> b when c -> d -> b, a adjacent to both c and d, and c, b
// nonadjacent.
bool meek_r4(const MixedGraph& g, int a, int b) {
    const int n = g.size();
    for (int d = 0; d < n; ++d) {
        if (d == a || d == b || !g.is_directed(d, b) || !g.adjacent(a, d)) continue;
        for (int c = 0; c < n; ++c) {
            if (c == a || c == b || c == d) continue;
            if (g.is_directed(c, d) && g.adjacent(a, c) && !g.adjacent(c, b)) return true;
        }
    }
    return false;
}

void require_pdag(const MixedGraph& g) {
    for (const auto& e : g.edges()) {
        bool ok = (e.mark_a == Mark::Tail && e.mark_b == Mark::Tail) ||
                  (e.mark_a == Mark::Tail && e.mark_b == Mark::Arrow) ||
                  (e.mark_a == Mark::Arrow && e.mark_b == Mark::Tail);
        if (!ok) throw GraphError("PDAG edges must be directed or undirected: " + g.name(e.a) + " - " + g.name(e.b));
    }
    if (g.has_directed_cycle()) throw GraphError("directed cycle in PDAG");
}

}  // namespace

MixedGraph apply_meek_rules(const MixedGraph& pdag, std::vector<MeekStep>* steps) {
    require_pdag(pdag);
    MixedGraph g = pdag;
    const int n = g.size();
    bool changed = true;
    while (changed) {
        changed = false;
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                if (a == b || !g.is_undirected(a, b)) continue;
                int rule = meek_r1(g, a, b)   ? 1
                           : meek_r2(g, a, b) ? 2
                           : meek_r3(g, a, b) ? 3
                           : meek_r4(g, a, b) ? 4
                                              : 0;
                if (rule == 0) continue;
                g.add_directed(a, b);
                if (steps) steps->push_back({a, b, rule});
                changed = true;
            }
        }
    }
    return g;
}

std::vector<std::tuple<int, int, int>> v_structures(const MixedGraph& g) {
    std::vector<std::tuple<int, int, int>> out;
    for (int b = 0; b < g.size(); ++b) {
        auto pa = g.parents(b);
        for (std::size_t i = 0; i < pa.size(); ++i)
            for (std::size_t j = i + 1; j < pa.size(); ++j)
                if (!g.adjacent(pa[i], pa[j])) out.emplace_back(pa[i], b, pa[j]);
    }
    std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) {
        return std::tie(std::get<0>(l), std::get<2>(l), std::get<1>(l)) <
               std::tie(std::get<0>(r), std::get<2>(r), std::get<1>(r));
    });
    return out;
}

MixedGraph dag_to_cpdag(const MixedGraph& dag) {
    require_dag(dag);
    MixedGraph g = dag.skeleton(Mark::Tail);
    for (const auto& [a, b, c] : v_structures(dag)) {
        g.add_directed(a, b);
        g.add_directed(c, b);
    }
    return apply_meek_rules(g);
}

std::optional<MixedGraph> pdag_to_dag(const MixedGraph& pdag) {
    require_pdag(pdag);
    const int n = pdag.size();
    MixedGraph out = pdag;
    std::vector<bool> alive(static_cast<std::size_t>(n), true);
    for (int removed = 0; removed < n; ++removed) {
        int sink = -1;
        for (int x = 0; x < n && sink < 0; ++x) {
            if (!alive[static_cast<std::size_t>(x)]) continue;
            bool ok = true;
            std::vector<int> adj;
            for (int y = 0; y < n; ++y)
                if (y != x && alive[static_cast<std::size_t>(y)] && pdag.adjacent(x, y)) {
                    if (pdag.is_directed(x, y)) ok = false;
                    adj.push_back(y);
                }
            if (!ok) continue;
            for (int y : adj) {
                if (!pdag.is_undirected(x, y)) continue;
                for (int z : adj)
                    if (z != y && !pdag.adjacent(y, z)) {
                        ok = false;
                        break;
                    }
                if (!ok) break;
            }
            if (ok) sink = x;
        }
        if (sink < 0) return std::nullopt;
        for (int y = 0; y < n; ++y)
            if (alive[static_cast<std::size_t>(y)] && y != sink && pdag.is_undirected(sink, y)) out.add_directed(y, sink);
        alive[static_cast<std::size_t>(sink)] = false;
    }
    return out;
}

bool d_separated(const MixedGraph& dag, int x, int y, const std::vector<int>& z) {
    const int n = dag.size();
    auto check = [&](int v) {
        if (v < 0 || v >= n) throw InvalidArgument("unknown node index " + std::to_string(v));
    };
    check(x);
    check(y);
    for (int v : z) check(v);
    if (x == y) throw InvalidArgument("d-separation query needs x != y");
    if (std::find(z.begin(), z.end(), x) != z.end() || std::find(z.begin(), z.end(), y) != z.end())
        throw InvalidArgument("x and y must not be in the conditioning set");
    require_dag(dag);

    std::vector<bool> in_z(static_cast<std::size_t>(n), false);
    for (int v : z) in_z[static_cast<std::size_t>(v)] = true;
    const std::vector<bool> anc_z = ancestors(dag, z);

    // State: (node, arrived_from_child). Arriving "up" means we came from a
    // child and travel against edge direction.
    std::vector<bool> seen_up(static_cast<std::size_t>(n), false), seen_down(static_cast<std::size_t>(n), false);
    std::vector<std::pair<int, bool>> stack{{x, true}};
    while (!stack.empty()) {
        auto [v, up] = stack.back();
        stack.pop_back();
        auto& seen = up ? seen_up : seen_down;
        if (seen[static_cast<std::size_t>(v)]) continue;
        seen[static_cast<std::size_t>(v)] = true;
        const bool blocked = in_z[static_cast<std::size_t>(v)];
        if (v == y && !blocked) return false;
        if (up) {
            if (blocked) continue;
            for (int p : dag.parents(v)) stack.emplace_back(p, true);
            for (int c : dag.children(v)) stack.emplace_back(c, false);
        } else {
            if (!blocked)
                for (int c : dag.children(v)) stack.emplace_back(c, false);
            if (anc_z[static_cast<std::size_t>(v)])
                for (int p : dag.parents(v)) stack.emplace_back(p, true);
        }
    }
    return true;
}

}  // namespace omicause
