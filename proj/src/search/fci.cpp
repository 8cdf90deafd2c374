#include <algorithm>
#include <deque>
#include <set>

#include "search/detail.hpp"
#include "search/search.hpp"
#include "util/error.hpp"
#include "util/subsets.hpp"

namespace omicause {

namespace {

bool arrow_at(const MixedGraph& g, int from, int to) { return g.endpoint(from, to) == Mark::Arrow; }
bool tail_at(const MixedGraph& g, int from, int to) { return g.endpoint(from, to) == Mark::Tail; }
bool circle_at(const MixedGraph& g, int from, int to) { return g.endpoint(from, to) == Mark::Circle; }

// from -> to
bool directed(const MixedGraph& g, int from, int to) { return arrow_at(g, from, to) && tail_at(g, to, from); }

bool is_collider(const MixedGraph& g, int a, int b, int c) { return arrow_at(g, a, b) && arrow_at(g, c, b); }

struct RuleLog {
    nlohmann::ordered_json* log;
    const MixedGraph& g;
    void operator()(int a, int b, Mark at_a, Mark at_b, const char* rule) const {
        if (!log) return;
        log->push_back({{"event", "orient"},
                        {"x", g.name(a)},
                        {"y", g.name(b)},
                        {"mark_x", mark_name(at_a)},
                        {"mark_y", mark_name(at_b)},
                        {"rule", rule}});
    }
};

bool rule1(MixedGraph& g, const RuleLog& note) {
    bool changed = false;
    const int n = g.size();
    for (int b = 0; b < n; ++b)
        for (int a : g.adjacents(b)) {
            if (!arrow_at(g, a, b)) continue;
            for (int c : g.adjacents(b)) {
                if (c == a || g.adjacent(a, c) || !circle_at(g, c, b)) continue;
                g.set_edge(b, c, Mark::Tail, Mark::Arrow);
                note(b, c, Mark::Tail, Mark::Arrow, "R1");
                changed = true;
            }
        }
    return changed;
}

bool rule2(MixedGraph& g, const RuleLog& note) {
    bool changed = false;
    const int n = g.size();
    for (int a = 0; a < n; ++a)
        for (int c : g.adjacents(a)) {
            if (!circle_at(g, a, c)) continue;
            for (int b : g.adjacents(a)) {
                if (b == c || !g.adjacent(b, c)) continue;
                const bool path1 = directed(g, a, b) && arrow_at(g, b, c);
                const bool path2 = arrow_at(g, a, b) && directed(g, b, c);
                if (!path1 && !path2) continue;
                g.set_endpoint(a, c, Mark::Arrow);
                note(a, c, g.endpoint(c, a), Mark::Arrow, "R2");
                changed = true;
                break;
            }
        }
    return changed;
}

bool rule3(MixedGraph& g, const RuleLog& note) {
    bool changed = false;
    const int n = g.size();
    for (int b = 0; b < n; ++b)
        for (int t : g.adjacents(b)) {
            if (!circle_at(g, t, b)) continue;
            bool fire = false;
            const auto adj_b = g.adjacents(b);
            for (std::size_t i = 0; i < adj_b.size() && !fire; ++i)
                for (std::size_t j = i + 1; j < adj_b.size() && !fire; ++j) {
                    const int a = adj_b[i], c = adj_b[j];
                    if (a == t || c == t || g.adjacent(a, c)) continue;
                    if (!is_collider(g, a, b, c)) continue;
                    if (!g.adjacent(a, t) || !g.adjacent(c, t)) continue;
                    if (circle_at(g, a, t) && circle_at(g, c, t)) fire = true;
                }
            if (!fire) continue;
            g.set_endpoint(t, b, Mark::Arrow);
            note(t, b, g.endpoint(b, t), Mark::Arrow, "R3");
            changed = true;
        }
    return changed;
}

// Shortest discriminating path <theta, ..., alpha, beta, gamma> for beta o-* gamma,
// found by breadth-first search back from alpha through colliders that are
// parents of gamma. Returns theta, or -1.
int discriminating_endpoint(const MixedGraph& g, int alpha, int beta, int gamma) {
    const int n = g.size();
    std::vector<bool> on_path(static_cast<std::size_t>(n), false);
    on_path[static_cast<std::size_t>(beta)] = true;
    on_path[static_cast<std::size_t>(gamma)] = true;
    on_path[static_cast<std::size_t>(alpha)] = true;
    // Queue entries: (node, its successor on the path towards beta).
    std::deque<std::pair<int, int>> queue{{alpha, beta}};
    while (!queue.empty()) {
        auto [v, next] = queue.front();
        queue.pop_front();
        // v is a collider between its predecessor and `next`, and v -> gamma.
        for (int w : g.adjacents(v)) {
            if (on_path[static_cast<std::size_t>(w)] || !arrow_at(g, w, v)) continue;
            if (!g.adjacent(w, gamma)) return w;
            if (directed(g, w, gamma) && arrow_at(g, v, w)) {
                on_path[static_cast<std::size_t>(w)] = true;
                queue.emplace_back(w, v);
            }
        }
    }
    return -1;
}

bool rule4(MixedGraph& g, const SepSetMap& sepsets, const RuleLog& note) {
    const int n = g.size();
    for (int beta = 0; beta < n; ++beta)
        for (int gamma : g.adjacents(beta)) {
            if (!circle_at(g, gamma, beta)) continue;
            for (int alpha : g.adjacents(beta)) {
                if (alpha == gamma || !directed(g, alpha, gamma) || !arrow_at(g, beta, alpha)) continue;
                const int theta = discriminating_endpoint(g, alpha, beta, gamma);
                if (theta < 0 || !sepsets.contains(theta, gamma)) continue;
                if (sepsets.separates_with(theta, gamma, beta)) {
                    g.set_edge(beta, gamma, Mark::Tail, Mark::Arrow);
                    note(beta, gamma, Mark::Tail, Mark::Arrow, "R4");
                } else {
                    g.set_edge(alpha, beta, Mark::Arrow, Mark::Arrow);
                    g.set_edge(beta, gamma, Mark::Arrow, Mark::Arrow);
                    note(alpha, beta, Mark::Arrow, Mark::Arrow, "R4");
                    note(beta, gamma, Mark::Arrow, Mark::Arrow, "R4");
                }
                return true;
            }
        }
    return false;
}

}  // namespace

std::vector<int> possible_dsep(const MixedGraph& g, int a) {
    const int n = g.size();
    if (a < 0 || a >= n) throw InvalidArgument("unknown node index " + std::to_string(a));
    std::vector<bool> in(static_cast<std::size_t>(n), false);
    std::set<std::pair<int, int>> seen;
    std::deque<std::pair<int, int>> queue;
    for (int w : g.adjacents(a)) {
        seen.emplace(a, w);
        queue.emplace_back(a, w);
        in[static_cast<std::size_t>(w)] = true;
    }
    while (!queue.empty()) {
        auto [u, v] = queue.front();
        queue.pop_front();
        for (int w : g.adjacents(v)) {
            if (w == u) continue;
            if (!is_collider(g, u, v, w) && !g.adjacent(u, w)) continue;
            if (!seen.emplace(v, w).second) continue;
            in[static_cast<std::size_t>(w)] = true;
            queue.emplace_back(v, w);
        }
    }
    std::vector<int> out;
    for (int v = 0; v < n; ++v)
        if (v != a && in[static_cast<std::size_t>(v)]) out.push_back(v);
    return out;
}

MixedGraph apply_fci_rules(MixedGraph g, const SepSetMap& sepsets, nlohmann::ordered_json* log) {
    const RuleLog note{log, g};
    bool changed = true;
    while (changed) {
        changed = rule1(g, note);
        changed = rule2(g, note) || changed;
        changed = rule3(g, note) || changed;
        if (!changed) changed = rule4(g, sepsets, note);
    }
    return g;
}

SearchResult fci(const IndependenceTest& test, const PcOptions& opts, const std::vector<int>& vars) {
    detail::check_options(opts);
    SearchResult r;
    r.algorithm = "fci";
    detail::TestRunner runner(test, detail::resolve_vars(test, vars), r.log);
    r.log.push_back({{"event", "start"},
                     {"algorithm", "fci"},
                     {"test", test.name()},
                     {"alpha", opts.alpha},
                     {"max_cond_set_size", opts.max_cond_set_size ? nlohmann::ordered_json(*opts.max_cond_set_size)
                                                                  : nlohmann::ordered_json(nullptr)},
                     {"stable", opts.stable}});

    MixedGraph g(runner.names());
    const int n = g.size();
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) g.add_undirected(a, b);
    detail::adjacency_search(g, runner, opts, r.sepsets, r.log);

    // Possible-D-SEP sets come from the circle skeleton with its colliders.
    const MixedGraph pattern = orient_v_structures(g.skeleton(Mark::Circle), r.sepsets, true).graph;
    std::vector<std::vector<int>> pds(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) pds[static_cast<std::size_t>(v)] = possible_dsep(pattern, v);

    const std::size_t cap = static_cast<std::size_t>(opts.max_cond_set_size.value_or(n));
    for (const auto& e : pattern.edges()) {
        const int a = e.a, b = e.b;
        for (int side : {a, b}) {
            std::vector<int> pool;
            for (int v : pds[static_cast<std::size_t>(side)])
                if (v != a && v != b) pool.push_back(v);
            std::vector<int> found;
            if (for_each_subset_up_to(pool, cap, [&](const std::vector<int>& z) {
                    if (!runner.run(a, b, z).independent) return false;
                    found = z;
                    return true;
                })) {
                g.remove_edge(a, b);
                r.sepsets.set(a, b, found);
                r.log.push_back({{"event", "remove"},
                                 {"x", g.name(a)},
                                 {"y", g.name(b)},
                                 {"sepset", detail::name_list(g, r.sepsets.get(a, b))},
                                 {"stage", "possible-dsep"}});
                break;
            }
        }
    }

    OrientationResult vs = orient_v_structures(g.skeleton(Mark::Circle), r.sepsets, true);
    for (const auto& edge : vs.graph.edges())
        if (edge.mark_a == Mark::Arrow || edge.mark_b == Mark::Arrow)
            r.log.push_back({{"event", "orient"},
                             {"x", vs.graph.name(edge.a)},
                             {"y", vs.graph.name(edge.b)},
                             {"mark_x", mark_name(edge.mark_a)},
                             {"mark_y", mark_name(edge.mark_b)},
                             {"rule", "collider"}});
    r.graph = apply_fci_rules(std::move(vs.graph), r.sepsets, &r.log);
    r.tests_run = runner.distinct();
    return r;
}

}  // namespace omicause
