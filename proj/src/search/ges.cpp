#include <algorithm>
#include <deque>
#include <limits>

#include "search/detail.hpp"
#include "search/search.hpp"
#include "util/error.hpp"
#include "util/parallel.hpp"
#include "util/subsets.hpp"

namespace omicause {

namespace {

enum class OpKind { Insert, Delete };

// Insert(x, y, T) or Delete(x, y, H); `set` is T or H.
struct Operator {
    OpKind kind;
    int x;
    int y;
    std::vector<int> set;
    std::vector<int> with_x;     // parent set of y scored with x
    std::vector<int> without_x;  // parent set of y scored without x
};

std::vector<int> sorted_union(std::vector<int> a, const std::vector<int>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

bool is_clique(const MixedGraph& g, const std::vector<int>& nodes) {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            if (!g.adjacent(nodes[i], nodes[j])) return false;
    return true;
}

// Whether some semi-directed path from `from` to `to` avoids `blocked`.
bool semi_directed_path(const MixedGraph& g, int from, int to, const std::vector<int>& blocked) {
    const int n = g.size();
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int b : blocked) seen[static_cast<std::size_t>(b)] = true;
    seen[static_cast<std::size_t>(from)] = true;
    std::deque<int> queue{from};
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (int w : g.adjacents(v)) {
            if (!(g.is_directed(v, w) || g.is_undirected(v, w))) continue;
            if (w == to) return true;
            if (seen[static_cast<std::size_t>(w)]) continue;
            seen[static_cast<std::size_t>(w)] = true;
            queue.push_back(w);
        }
    }
    return false;
}

std::vector<int> intersect_adjacent(const MixedGraph& g, const std::vector<int>& nodes, int x) {
    std::vector<int> out;
    for (int v : nodes)
        if (g.adjacent(v, x)) out.push_back(v);
    return out;
}

std::vector<Operator> insert_candidates(const MixedGraph& g) {
    std::vector<Operator> ops;
    const int n = g.size();
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            if (x == y || g.adjacent(x, y)) continue;
            const std::vector<int> ne_y = g.neighbors(y);
            const std::vector<int> na = intersect_adjacent(g, ne_y, x);
            std::vector<int> pool;
            for (int v : ne_y)
                if (!g.adjacent(v, x)) pool.push_back(v);
            const std::vector<int> pa_y = g.parents(y);
            for (std::size_t k = 0; k <= pool.size(); ++k)
                for_each_subset_of_size(pool, k, [&](const std::vector<int>& t) {
                    const std::vector<int> na_t = sorted_union(na, t);
                    if (!is_clique(g, na_t)) return false;
                    if (semi_directed_path(g, y, x, na_t)) return false;
                    const std::vector<int> base = sorted_union(pa_y, na_t);
                    ops.push_back({OpKind::Insert, x, y, t, sorted_union(base, {x}), base});
                    return false;
                });
        }
    return ops;
}

std::vector<Operator> delete_candidates(const MixedGraph& g) {
    std::vector<Operator> ops;
    const int n = g.size();
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            if (x == y || !(g.is_directed(x, y) || g.is_undirected(x, y))) continue;
            const std::vector<int> na = intersect_adjacent(g, g.neighbors(y), x);
            const std::vector<int> pa_y = g.parents(y);
            for (std::size_t k = 0; k <= na.size(); ++k)
                for_each_subset_of_size(na, k, [&](const std::vector<int>& h) {
                    std::vector<int> rest;
                    std::set_difference(na.begin(), na.end(), h.begin(), h.end(), std::back_inserter(rest));
                    if (!is_clique(g, rest)) return false;
                    const std::vector<int> with_x = sorted_union(sorted_union(pa_y, rest), {x});
                    std::vector<int> without_x;
                    for (int v : with_x)
                        if (v != x) without_x.push_back(v);
                    ops.push_back({OpKind::Delete, x, y, h, with_x, without_x});
                    return false;
                });
        }
    return ops;
}

MixedGraph rebuild(const MixedGraph& pdag) {
    auto dag = pdag_to_dag(pdag);
    if (!dag) throw GraphError("ges produced a PDAG without a consistent extension");
    return dag_to_cpdag(*dag);
}

void apply(MixedGraph& g, const Operator& op) {
    if (op.kind == OpKind::Insert) {
        g.add_directed(op.x, op.y);
        for (int t : op.set) g.add_directed(t, op.y);
    } else {
        g.remove_edge(op.x, op.y);
        for (int h : op.set) {
            g.add_directed(op.y, h);
            if (g.is_undirected(op.x, h)) g.add_directed(op.x, h);
        }
    }
    g = rebuild(g);
}

SearchResult greedy_search(const ScoreFunction& score, unsigned parallelism, const char* algorithm) {
    const int n = score.num_variables();
    if (n < 1) throw InvalidArgument("score-based search needs at least one variable");
    if (parallelism < 1) throw InvalidArgument("parallelism must be positive");
    CachedScore cached(score);

    SearchResult r;
    r.algorithm = algorithm;
    r.log.push_back({{"event", "start"}, {"algorithm", algorithm}, {"score", score.name()}});
    MixedGraph g(score.variables());

    double total = 0.0;
    for (int v = 0; v < n; ++v) total += cached.local(v, {}).value;
    r.log.push_back({{"event", "initial"}, {"score", total}});

    for (OpKind phase : {OpKind::Insert, OpKind::Delete}) {
        const char* name = phase == OpKind::Insert ? "insert" : "delete";
        while (true) {
            const std::vector<Operator> ops = phase == OpKind::Insert ? insert_candidates(g) : delete_candidates(g);
            std::vector<double> delta(ops.size());
            parallel_for(ops.size(), parallelism, [&](std::size_t i) {
                const Operator& op = ops[i];
                const double with = cached.local(op.y, op.with_x).value;
                const double without = cached.local(op.y, op.without_x).value;
                delta[i] = phase == OpKind::Insert ? with - without : without - with;
            });
            std::size_t best = ops.size();
            double best_delta = 0.0;
            for (std::size_t i = 0; i < ops.size(); ++i)
                if (delta[i] > best_delta) {
                    best_delta = delta[i];
                    best = i;
                }
            if (best == ops.size()) break;
            const Operator& op = ops[best];
            apply(g, op);
            total += best_delta;
            r.log.push_back({{"event", name},
                             {"x", g.name(op.x)},
                             {"y", g.name(op.y)},
                             {"set", detail::name_list(g, op.set)},
                             {"delta", best_delta},
                             {"score", total}});
        }
    }

    r.graph = std::move(g);
    auto dag = pdag_to_dag(r.graph);
    if (!dag) throw GraphError("ges produced a PDAG without a consistent extension");
    r.score_total = dag_score(cached, *dag);
    r.score_evaluations = cached.entries();
    return r;
}

}  // namespace

SearchResult ges(const ScoreFunction& score) { return greedy_search(score, 1, "ges"); }

SearchResult fges(const ScoreFunction& score, unsigned parallelism) {
    return greedy_search(score, parallelism, "fges");
}

}  // namespace omicause
