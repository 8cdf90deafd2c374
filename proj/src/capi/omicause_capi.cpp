#include "omicause/omicause.h"

#include <cstring>
#include <memory>
#include <string>

#include <json.hpp>

#include "featsel/featsel.hpp"
#include "graph/graph_io.hpp"
#include "graph/orientation.hpp"
#include "pipeline/pipeline.hpp"
#include "search/search.hpp"
#include "synth/synth.hpp"
#include "util/error.hpp"

struct omc_table {
    omicause::DataTable table;
};

struct omc_graph {
    omicause::MixedGraph graph;
};

namespace {

using nlohmann::json;
using nlohmann::ordered_json;
using namespace omicause;

thread_local std::string last_error;

omc_status classify(const std::exception& e) {
    if (auto* s = dynamic_cast<const StageError*>(&e); s && s->cause()) {
        try {
            std::rethrow_exception(s->cause());
        } catch (const std::exception& inner) {
            return classify(inner);
        } catch (...) {
            return OMC_ERR_INTERNAL;
        }
    }
    if (dynamic_cast<const InvalidArgument*>(&e)) return OMC_ERR_INVALID_ARGUMENT;
    if (dynamic_cast<const IoError*>(&e)) return OMC_ERR_IO;
    if (dynamic_cast<const DataError*>(&e)) return OMC_ERR_DATA;
    if (dynamic_cast<const GraphError*>(&e)) return OMC_ERR_GRAPH;
    if (dynamic_cast<const json::exception*>(&e)) return OMC_ERR_INVALID_ARGUMENT;
    return OMC_ERR_INTERNAL;
}

template <class Fn>
omc_status guarded(Fn&& fn) {
    try {
        fn();
        last_error.clear();
        return OMC_OK;
    } catch (const std::exception& e) {
        last_error = e.what();
        return classify(e);
    } catch (...) {
        last_error = "unknown error";
        return OMC_ERR_INTERNAL;
    }
}

char* dup(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void require(const void* p, const char* what) {
    if (!p) throw InvalidArgument(std::string(what) + " must not be NULL");
}

json parse_options(const char* text) {
    if (!text || !*text) return json::object();
    json j = json::parse(text);
    if (!j.is_object()) throw InvalidArgument("options must be a JSON object");
    return j;
}

std::optional<int> cap_option(const json& o, const char* key, std::optional<int> fallback) {
    if (!o.contains(key)) return fallback;
    if (o[key].is_null()) return std::nullopt;
    return o[key].get<int>();
}

ordered_json stats_json(const ContinuousStats& s) {
    return {{"n", s.n}, {"mean", s.mean}, {"sd", s.sd}, {"min", s.min}, {"max", s.max}};
}

ordered_json summary_json(const Summary& s) {
    ordered_json j;
    j["name"] = s.name;
    j["kind"] = s.meta.kind.is_categorical() ? "categorical" : "continuous";
    j["family"] = family_name(s.meta.family);
    j["rows"] = s.n_rows;
    if (s.meta.kind.is_categorical()) {
        auto levels = ordered_json::array();
        for (const auto& l : s.levels) {
            ordered_json e{{"level", l.level}, {"count", l.count}};
            if (!s.target_levels.empty()) e["by_target"] = l.by_target;
            levels.push_back(std::move(e));
        }
        j["levels"] = std::move(levels);
    } else {
        j["stats"] = stats_json(s.stats);
        if (!s.target_levels.empty()) {
            auto by = ordered_json::array();
            for (const auto& st : s.stats_by_target) by.push_back(stats_json(st));
            j["stats_by_target"] = std::move(by);
        }
    }
    if (!s.target_levels.empty()) j["target_levels"] = s.target_levels;
    return j;
}

}  // namespace

extern "C" {

const char* omc_version(void) { return "0.1.0"; }

const char* omc_last_error(void) { return last_error.c_str(); }

const char* omc_status_name(omc_status status) {
    switch (status) {
        case OMC_OK: return "ok";
        case OMC_ERR_INVALID_ARGUMENT: return "invalid argument";
        case OMC_ERR_IO: return "i/o error";
        case OMC_ERR_DATA: return "data error";
        case OMC_ERR_GRAPH: return "graph error";
        case OMC_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void omc_string_free(char* s) { delete[] s; }

omc_status omc_table_load_csv(const char* path, const char* target, const char* kinds_json, omc_table** out,
                              char** report_json) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        std::map<std::string, VariableKind> kinds;
        const json requested = parse_options(kinds_json);
        for (const auto& [name, kind] : requested.items()) {
            const auto k = kind.get<std::string>();
            if (k == "continuous") kinds.emplace(name, VariableKind::continuous());
            else if (k == "categorical") kinds.emplace(name, VariableKind::categorical(2));
            else throw InvalidArgument("kind for '" + name + "' must be continuous or categorical");
        }
        LoadResult r = load_csv(path, target ? target : "", kinds);
        if (report_json) {
            ordered_json j{{"rows_read", r.report.rows_read},
                           {"rows_dropped", r.report.rows_dropped},
                           {"warnings", r.report.warnings}};
            *report_json = dup(j.dump());
        }
        *out = new omc_table{std::move(r.table)};
    });
}

void omc_table_free(omc_table* table) { delete table; }

omc_status omc_table_info_json(const omc_table* table, char** out) {
    return guarded([&] {
        require(table, "table");
        require(out, "out");
        const DataTable& t = table->table;
        ordered_json j;
        j["rows"] = t.n_rows();
        j["target"] = t.target() ? ordered_json(*t.target()) : ordered_json(nullptr);
        auto cols = ordered_json::array();
        for (std::size_t i = 0; i < t.n_cols(); ++i) {
            const Column& c = t.column(i);
            ordered_json e;
            e["name"] = c.meta.name;
            e["kind"] = c.meta.kind.is_categorical() ? "categorical" : "continuous";
            e["cardinality"] = c.meta.kind.cardinality();
            e["family"] = family_name(c.meta.family);
            e["levels"] = c.levels;
            cols.push_back(std::move(e));
        }
        j["columns"] = std::move(cols);
        *out = dup(j.dump());
    });
}

omc_status omc_table_summary_json(const omc_table* table, const char* column, int split_by_target, char** out) {
    return guarded([&] {
        require(table, "table");
        require(column, "column");
        require(out, "out");
        *out = dup(summary_json(column_summary(table->table, column, split_by_target != 0)).dump());
    });
}

omc_status omc_table_write_csv(const omc_table* table, const char* path) {
    return guarded([&] {
        require(table, "table");
        require(path, "path");
        write_csv(table->table, path);
    });
}

omc_status omc_table_select(const omc_table* table, const char* names_json, omc_table** out) {
    return guarded([&] {
        require(table, "table");
        require(names_json, "names_json");
        require(out, "out");
        const auto names = json::parse(names_json).get<std::vector<std::string>>();
        *out = new omc_table{table->table.select(names)};
    });
}

omc_status omc_select_features(const omc_table* table, const char* options_json, char** out) {
    return guarded([&] {
        require(table, "table");
        require(out, "out");
        const json o = parse_options(options_json);
        const DataTable& t = table->table;
        const std::string method = o.value("method", "mi");
        std::string target = o.value("target", std::string());
        if (target.empty() && t.target()) target = *t.target();
        if (target.empty()) throw InvalidArgument("feature selection needs a target");
        const int max_features = o.value("max_features", 10);
        const std::uint64_t seed = o.value("seed", std::uint64_t{0});
        const unsigned threads = o.value("threads", 1u);
        if (method == "mi") {
            const auto r = mi_select(t, target, max_features, MiOptions{o.value("neighbors", 3), seed}, threads);
            *out = dup(selection_to_json(r, max_features).dump());
        } else if (method == "mmmb") {
            if (max_features < 1) throw InvalidArgument("max_features must be at least 1");
            RcitParams rp;
            rp.seed = seed;
            auto test = make_test(o.value("test", "chi-square"), t, o.value("alpha", 0.05), rp);
            const int ti = static_cast<int>(t.index_of(target));
            const MarkovBlanket mb = mmmb(*test, ti, MbOptions{cap_option(o, "max_cond_set_size", 3)});
            std::vector<int> ranked = mb.full;
            std::stable_sort(ranked.begin(), ranked.end(),
                             [&](int a, int b) { return mb.association.at(a) > mb.association.at(b); });
            if (ranked.size() > static_cast<std::size_t>(max_features - 1))
                ranked.resize(static_cast<std::size_t>(max_features - 1));
            std::vector<std::string> selected{target};
            for (int v : ranked) selected.push_back(t.meta(static_cast<std::size_t>(v)).name);
            *out = dup(selection_to_json(mb, *test, selected).dump());
        } else {
            throw InvalidArgument("selection method must be mi or mmmb");
        }
    });
}

omc_status omc_discover(const omc_table* table, const char* options_json, char** out) {
    return guarded([&] {
        require(table, "table");
        require(out, "out");
        const json o = parse_options(options_json);
        const DataTable& t = table->table;
        const std::string algorithm = o.value("algorithm", "pc");
        const unsigned threads = o.value("threads", 1u);
        SearchResult r;
        if (algorithm == "pc" || algorithm == "fci" || algorithm == "pc_on_skeleton") {
            PcOptions opts{o.value("alpha", 0.05), cap_option(o, "max_cond_set_size", 3), o.value("stable", true)};
            RcitParams rp;
            rp.seed = o.value("seed", std::uint64_t{0});
            auto test = make_test(o.value("test", "chi-square"), t, opts.alpha, rp);
            if (algorithm == "pc") r = pc(*test, opts);
            else if (algorithm == "fci") r = fci(*test, opts);
            else {
                if (!o.contains("skeleton")) throw InvalidArgument("pc_on_skeleton needs a skeleton");
                const json& s = o["skeleton"];
                r = pc_on_skeleton(graph_from_json(s.contains("graph") ? s["graph"] : s), *test, opts);
            }
        } else if (algorithm == "ges" || algorithm == "fges") {
            auto score = make_score(o.value("score", "discrete-bic"), t,
                                    ScoreOptions{o.value("penalty_discount", 1.0), o.value("ess", 1.0)});
            r = algorithm == "ges" ? ges(*score) : fges(*score, threads);
        } else {
            throw InvalidArgument("unknown algorithm '" + algorithm + "'");
        }
        *out = dup(search_result_to_json(r).dump());
    });
}

omc_status omc_graph_from_json(const char* text, omc_graph** out) {
    return guarded([&] {
        require(text, "json");
        require(out, "out");
        const json j = json::parse(text);
        *out = new omc_graph{graph_from_json(j.contains("graph") ? j["graph"] : j)};
    });
}

void omc_graph_free(omc_graph* graph) { delete graph; }

omc_status omc_graph_to_json(const omc_graph* graph, char** out) {
    return guarded([&] {
        require(graph, "graph");
        require(out, "out");
        *out = dup(graph_to_json(graph->graph).dump());
    });
}

omc_status omc_graph_to_dot(const omc_graph* graph, char** out) {
    return guarded([&] {
        require(graph, "graph");
        require(out, "out");
        *out = dup(to_dot(graph->graph));
    });
}

omc_status omc_graph_to_cpdag(const omc_graph* dag, omc_graph** out) {
    return guarded([&] {
        require(dag, "dag");
        require(out, "out");
        *out = new omc_graph{dag_to_cpdag(dag->graph)};
    });
}

omc_status omc_claims_json(const omc_graph* graph, const omc_table* table, const char* target,
                           const char* provenance_json, char** out) {
    return guarded([&] {
        require(graph, "graph");
        require(target, "target");
        require(out, "out");
        std::vector<VariableMeta> metas;
        if (table) {
            metas = table->table.metas();
        } else {
            for (const auto& n : graph->graph.nodes()) metas.push_back({n, VariableKind::continuous(), family_from_name(n, target)});
        }
        const json p = parse_options(provenance_json);
        ClaimProvenance prov{p.value("algorithm", ""), p.value("test_or_score", ""), p.value("alpha", 0.0),
                             p.value("graph_file", "")};
        *out = dup(claims_to_json(edges_to_claims(graph->graph, target, metas, prov)).dump());
    });
}

omc_status omc_simulate(const char* spec_json, omc_table** table_out, omc_graph** dag_out) {
    return guarded([&] {
        const json o = parse_options(spec_json);
        SimSpec spec;
        spec.n_nodes = o.value("nodes", 5);
        spec.n_rows = o.value("rows", std::size_t{1000});
        spec.seed = o.value("seed", std::uint64_t{0});
        if (o.contains("edge_density")) spec.edge_density = o["edge_density"].get<double>();
        else spec.expected_degree = o.value("expected_degree", 2.0);
        const std::string type = o.value("type", "discrete");
        const int card = o.value("cardinality", 3);
        MixedGraph dag = random_dag(spec);
        std::unique_ptr<omc_table> table;
        if (type == "discrete") {
            table = std::make_unique<omc_table>(
                omc_table{simulate_discrete(dag, std::vector<int>(static_cast<std::size_t>(spec.n_nodes), card),
                                            spec.n_rows, spec.seed)});
        } else if (type == "cg") {
            const double frac = o.value("categorical_fraction", 0.0);
            if (!(frac >= 0.0 && frac <= 1.0)) throw InvalidArgument("categorical_fraction must lie in [0, 1]");
            const auto n_cat = static_cast<int>(std::lround(frac * spec.n_nodes));
            std::vector<VariableKind> kinds;
            for (int i = 0; i < spec.n_nodes; ++i)
                kinds.push_back(i < n_cat ? VariableKind::categorical(card) : VariableKind::continuous());
            table = std::make_unique<omc_table>(omc_table{simulate_cg(dag, kinds, spec.n_rows, spec.seed)});
        } else {
            throw InvalidArgument("simulation type must be discrete or cg");
        }
        if (table_out) *table_out = table.release();
        if (dag_out) *dag_out = new omc_graph{std::move(dag)};
    });
}

omc_status omc_evaluate(const omc_graph* estimated, const omc_graph* truth, char** out) {
    return guarded([&] {
        require(estimated, "estimated");
        require(truth, "truth");
        require(out, "out");
        *out = dup(metrics_to_json(evaluate(estimated->graph, truth->graph)).dump());
    });
}

omc_status omc_run_pipeline(const char* config_path, const char* overrides_json, unsigned threads, char** out) {
    return guarded([&] {
        PipelineConfig c = config_path && *config_path ? load_config(config_path) : PipelineConfig{};
        const json overrides = parse_options(overrides_json);
        for (const auto& [key, value] : overrides.items())
            set_config_value(c, key, value.is_string() ? value.get<std::string>() : value.dump());
        RunReport r = run_pipeline(c, RunOptions{threads});
        if (out) {
            ordered_json j = r.report;
            j["output_dir"] = r.output_dir;
            j["wall_seconds"] = r.wall_seconds;
            *out = dup(j.dump());
        }
    });
}

}  // extern "C"
