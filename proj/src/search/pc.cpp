#include <algorithm>
#include <set>

#include "graph/graph_io.hpp"
#include "search/detail.hpp"
#include "search/search.hpp"
#include "util/error.hpp"
#include "util/subsets.hpp"

namespace omicause {

namespace detail {

TestRunner::TestRunner(const IndependenceTest& test, std::vector<int> vars, nlohmann::ordered_json& log)
    : test_(test), vars_(std::move(vars)), log_(log) {
    for (int v : vars_) names_.push_back(test.variables()[static_cast<std::size_t>(v)]);
}

const CITestResult& TestRunner::run(int a, int b, const std::vector<int>& z) {
    auto key = TestCacheKey::make(a, b, z);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<int> tz;
    tz.reserve(key.z.size());
    for (int v : key.z) tz.push_back(vars_[static_cast<std::size_t>(v)]);
    const CITestResult r =
        test_.test(vars_[static_cast<std::size_t>(key.x)], vars_[static_cast<std::size_t>(key.y)], tz);
    nlohmann::ordered_json zn = nlohmann::ordered_json::array();
    for (int v : key.z) zn.push_back(names_[static_cast<std::size_t>(v)]);
    log_.push_back({{"event", "test"},
                    {"x", names_[static_cast<std::size_t>(key.x)]},
                    {"y", names_[static_cast<std::size_t>(key.y)]},
                    {"z", std::move(zn)},
                    {"statistic", r.statistic},
                    {"dof", r.dof},
                    {"p_value", r.p_value},
                    {"independent", r.independent}});
    return memo_.emplace(std::move(key), r).first->second;
}

std::vector<int> resolve_vars(const IndependenceTest& test, const std::vector<int>& vars) {
    const int n = test.num_variables();
    std::vector<int> out = vars;
    if (out.empty())
        for (int i = 0; i < n; ++i) out.push_back(i);
    std::set<int> seen;
    for (int v : out) {
        if (v < 0 || v >= n) throw InvalidArgument("search variable index out of range");
        if (!seen.insert(v).second) throw InvalidArgument("search variables repeat an index");
    }
    if (out.size() < 2) throw InvalidArgument("search needs at least two variables");
    return out;
}

nlohmann::ordered_json name_list(const MixedGraph& g, const std::vector<int>& nodes) {
    auto j = nlohmann::ordered_json::array();
    for (int v : nodes) j.push_back(g.name(v));
    return j;
}

void check_options(const PcOptions& opts) {
    if (!(opts.alpha > 0.0 && opts.alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
    if (opts.max_cond_set_size && *opts.max_cond_set_size < 0)
        throw InvalidArgument("max_cond_set_size must be non-negative");
}

void adjacency_search(MixedGraph& g, TestRunner& runner, const PcOptions& opts, SepSetMap& sepsets,
                      nlohmann::ordered_json& log) {
    const int n = g.size();
    const int cap = opts.max_cond_set_size.value_or(n);
    for (int level = 0; level <= cap; ++level) {
        std::vector<std::vector<int>> snapshot(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) snapshot[static_cast<std::size_t>(v)] = g.adjacents(v);
        auto adj = [&](int v) -> std::vector<int> {
            return opts.stable ? snapshot[static_cast<std::size_t>(v)] : g.adjacents(v);
        };

        bool any_large = false;
        for (int a = 0; a < n; ++a) {
            for (int b = a + 1; b < n; ++b) {
                if (!g.adjacent(a, b)) continue;
                std::vector<int> pool_a, pool_b;
                for (int v : adj(a))
                    if (v != b) pool_a.push_back(v);
                for (int v : adj(b))
                    if (v != a) pool_b.push_back(v);
                const auto k = static_cast<std::size_t>(level);
                if (pool_a.size() < k && pool_b.size() < k) continue;
                if (pool_a.size() > k || pool_b.size() > k) any_large = true;

                std::set<std::vector<int>> tried;
                std::vector<int> found;
                bool separated = false;
                auto attempt = [&](const std::vector<int>& z) {
                    if (!tried.insert(z).second) return false;
                    if (!runner.run(a, b, z).independent) return false;
                    found = z;
                    separated = true;
                    return true;
                };
                if (!for_each_subset_of_size(pool_a, k, attempt)) for_each_subset_of_size(pool_b, k, attempt);
                if (separated) {
                    g.remove_edge(a, b);
                    sepsets.set(a, b, found);
                    log.push_back({{"event", "remove"},
                                   {"x", g.name(a)},
                                   {"y", g.name(b)},
                                   {"sepset", name_list(g, sepsets.get(a, b))}});
                }
            }
        }
        if (!any_large) break;
    }
}

}  // namespace detail

namespace {

void log_orientation(nlohmann::ordered_json& log, const MixedGraph& g, int from, int to, const std::string& rule) {
    log.push_back({{"event", "orient"}, {"from", g.name(from)}, {"to", g.name(to)}, {"rule", rule}});
}

// v-structures then Meek closure, with every step logged.
MixedGraph orient_cpdag(const MixedGraph& skeleton, const SepSetMap& sepsets, nlohmann::ordered_json& log) {
    OrientationResult vs = orient_v_structures(skeleton, sepsets, false);
    for (const auto& w : vs.warnings) log.push_back({{"event", "conflict"}, {"message", w}});
    for (const auto& e : vs.graph.edges()) {
        if (vs.graph.is_directed(e.a, e.b)) log_orientation(log, vs.graph, e.a, e.b, "collider");
        if (vs.graph.is_directed(e.b, e.a)) log_orientation(log, vs.graph, e.b, e.a, "collider");
    }
    std::vector<MeekStep> steps;
    MixedGraph out = apply_meek_rules(vs.graph, &steps);
    for (const auto& s : steps) log_orientation(log, out, s.from, s.to, "meek-R" + std::to_string(s.rule));
    return out;
}

nlohmann::ordered_json options_json(const PcOptions& opts) {
    nlohmann::ordered_json j;
    j["alpha"] = opts.alpha;
    if (opts.max_cond_set_size)
        j["max_cond_set_size"] = *opts.max_cond_set_size;
    else
        j["max_cond_set_size"] = nullptr;
    j["stable"] = opts.stable;
    return j;
}

}  // namespace

SearchResult pc(const IndependenceTest& test, const PcOptions& opts, const std::vector<int>& vars) {
    detail::check_options(opts);
    SearchResult r;
    r.algorithm = "pc";
    detail::TestRunner runner(test, detail::resolve_vars(test, vars), r.log);
    r.log.push_back({{"event", "start"}, {"algorithm", "pc"}, {"test", test.name()}, {"options", options_json(opts)}});

    MixedGraph g(runner.names());
    for (int a = 0; a < g.size(); ++a)
        for (int b = a + 1; b < g.size(); ++b) g.add_undirected(a, b);
    detail::adjacency_search(g, runner, opts, r.sepsets, r.log);
    r.graph = orient_cpdag(g, r.sepsets, r.log);
    r.tests_run = runner.distinct();
    return r;
}

SearchResult pc_on_skeleton(const MixedGraph& skeleton, const IndependenceTest& test, const PcOptions& opts) {
    detail::check_options(opts);
    std::vector<int> vars;
    const auto& names = test.variables();
    for (const auto& node : skeleton.nodes()) {
        auto it = std::find(names.begin(), names.end(), node);
        if (it == names.end()) throw InvalidArgument("skeleton node '" + node + "' is not a test variable");
        vars.push_back(static_cast<int>(it - names.begin()));
    }
    for (const auto& e : skeleton.edges())
        if (e.mark_a != Mark::Tail || e.mark_b != Mark::Tail)
            throw InvalidArgument("pc_on_skeleton expects an undirected skeleton");

    SearchResult r;
    r.algorithm = "pc_on_skeleton";
    r.log.push_back({{"event", "start"},
                     {"algorithm", "pc_on_skeleton"},
                     {"test", test.name()},
                     {"options", options_json(opts)},
                     {"skeleton_edges", skeleton.num_edges()}});
    if (skeleton.size() < 2) {
        r.graph = skeleton;
        return r;
    }
    detail::TestRunner runner(test, vars, r.log);
    MixedGraph g = skeleton;
    detail::adjacency_search(g, runner, opts, r.sepsets, r.log);

    // Pairs absent from the input skeleton were never tested; those that head
    // an unshielded triple need a sepset before colliders can be decided.
    const int n = g.size();
    const int cap = opts.max_cond_set_size.value_or(n);
    for (int a = 0; a < n; ++a) {
        for (int c = a + 1; c < n; ++c) {
            if (g.adjacent(a, c) || r.sepsets.contains(a, c)) continue;
            std::vector<int> common;
            for (int b = 0; b < n; ++b)
                if (b != a && b != c && g.adjacent(a, b) && g.adjacent(c, b)) common.push_back(b);
            if (common.empty()) continue;
            std::set<int> pool_set;
            for (int v : g.adjacents(a)) pool_set.insert(v);
            for (int v : g.adjacents(c)) pool_set.insert(v);
            const std::vector<int> pool(pool_set.begin(), pool_set.end());
            std::vector<int> found;
            const bool ok = for_each_subset_up_to(pool, static_cast<std::size_t>(cap), [&](const std::vector<int>& z) {
                if (!runner.run(a, c, z).independent) return false;
                found = z;
                return true;
            });
            if (ok) {
                r.sepsets.set(a, c, found);
                r.log.push_back({{"event", "sepset"},
                                 {"x", g.name(a)},
                                 {"y", g.name(c)},
                                 {"sepset", detail::name_list(g, r.sepsets.get(a, c))}});
            } else {
                r.sepsets.set(a, c, common);
                r.log.push_back({{"event", "unresolved-pair"},
                                 {"x", g.name(a)},
                                 {"y", g.name(c)},
                                 {"sepset", detail::name_list(g, r.sepsets.get(a, c))}});
            }
        }
    }
    r.graph = orient_cpdag(g, r.sepsets, r.log);
    r.tests_run = runner.distinct();
    return r;
}

nlohmann::ordered_json search_result_to_json(const SearchResult& r) {
    nlohmann::ordered_json j;
    j["algorithm"] = r.algorithm;
    j["graph"] = graph_to_json(r.graph);
    auto seps = nlohmann::ordered_json::array();
    for (const auto& [pair, set] : r.sepsets.entries())
        seps.push_back({{"x", r.graph.name(pair.first)},
                        {"y", r.graph.name(pair.second)},
                        {"sepset", detail::name_list(r.graph, set)}});
    j["sepsets"] = std::move(seps);
    if (r.score_total)
        j["score_total"] = *r.score_total;
    else
        j["score_total"] = nullptr;
    j["tests_run"] = r.tests_run;
    j["score_evaluations"] = r.score_evaluations;
    j["log"] = r.log;
    return j;
}

}  // namespace omicause
