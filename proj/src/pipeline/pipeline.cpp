#include "pipeline/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "featsel/featsel.hpp"
#include "graph/graph_io.hpp"

namespace omicause {

namespace fs = std::filesystem;

namespace {

// Files written by one run; removed again unless the run completes.
class OutputSet {
public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}
    OutputSet(const OutputSet&) = delete;
    OutputSet& operator=(const OutputSet&) = delete;
    ~OutputSet() {
        if (committed_) return;
        std::error_code ec;
        for (const auto& f : written_) fs::remove(dir_ / f, ec);
    }

    void write(const std::string& name, const std::string& content) {
        const fs::path p = dir_ / name;
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write '" + p.string() + "'");
        written_.push_back(name);
        out << content;
        if (!out) throw IoError("write failed for '" + p.string() + "'");
    }

    void commit() { committed_ = true; }

private:
    fs::path dir_;
    std::vector<std::string> written_;
    bool committed_ = false;
};

template <class Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what(), std::current_exception());
    }
}

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

std::vector<std::string> in_table_order(const DataTable& table, const std::vector<std::string>& names) {
    std::vector<std::string> out;
    for (const auto& n : table.names())
        if (std::find(names.begin(), names.end(), n) != names.end()) out.push_back(n);
    return out;
}

struct Selection {
    std::vector<std::string> names;
    nlohmann::ordered_json json;
};

Selection select_features(const DataTable& table, const PipelineConfig& c, unsigned threads) {
    Selection s;
    if (c.selection_method == "none") {
        s.names = table.names();
        s.json = {{"method", "none"},
                  {"target", c.target.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(c.target)},
                  {"alpha_or_k", nullptr},
                  {"selected", s.names},
                  {"scores", nlohmann::ordered_json::object()}};
        return s;
    }
    if (c.selection_method == "mi") {
        const int k = std::min<int>(c.max_features, static_cast<int>(table.n_cols()));
        const RankedFeatures r = mi_select(table, c.target, k, MiOptions{c.mi_neighbors, c.seed}, threads);
        s.names = in_table_order(table, r.selected);
        s.json = selection_to_json(r, k);
        return s;
    }

    // mmmb: the chi-square route only sees the categorical columns.
    DataTable pool = table;
    if (c.selection_test == "chi-square") {
        std::vector<std::string> cats;
        for (std::size_t i = 0; i < table.n_cols(); ++i)
            if (table.is_categorical(i)) cats.push_back(table.meta(i).name);
        pool = table.select(cats);
    }
    RcitParams rp;
    rp.seed = c.seed;
    auto test = make_test(c.selection_test, pool, c.selection_alpha, rp);
    const int t = static_cast<int>(pool.index_of(c.target));
    const MarkovBlanket mb = mmmb(*test, t, MbOptions{c.selection_max_cond_set_size});

    std::vector<int> ranked = mb.full;
    std::stable_sort(ranked.begin(), ranked.end(),
                     [&](int a, int b) { return mb.association.at(a) > mb.association.at(b); });
    if (ranked.size() > static_cast<std::size_t>(c.max_features - 1))
        ranked.resize(static_cast<std::size_t>(c.max_features - 1));
    std::vector<std::string> chosen{c.target};
    for (int v : ranked) chosen.push_back(pool.meta(static_cast<std::size_t>(v)).name);
    s.names = in_table_order(table, chosen);
    s.json = selection_to_json(mb, *test, s.names);
    return s;
}

void check_kinds(const DataTable& t, const PipelineConfig& c) {
    auto all_categorical = [&] {
        for (std::size_t i = 0; i < t.n_cols(); ++i)
            if (!t.is_categorical(i)) return false;
        return true;
    };
    const bool categorical = all_categorical();
    if (c.constraint_based() && c.test == "chi-square" && !categorical)
        throw InvalidArgument("chi-square needs categorical variables; the selection contains continuous ones");
    if (!c.constraint_based() && (c.score == "discrete-bic" || c.score == "bdeu") && !categorical)
        throw InvalidArgument(c.score + " needs categorical variables; the selection contains continuous ones");
}

SearchResult discover(const DataTable& data, const std::vector<std::string>& dataset_names, const PipelineConfig& c,
                      unsigned threads) {
    check_kinds(data, c);
    PcOptions opts{c.alpha, c.max_cond_set_size, c.stable};
    if (c.constraint_based()) {
        RcitParams rp;
        rp.seed = c.seed;
        rp.d_xy = c.rcit_features;
        rp.d_z = c.rcit_conditioning_features;
        auto test = make_test(c.test, data, c.alpha, rp);
        if (c.algorithm == "pc") return pc(*test, opts);
        if (c.algorithm == "fci") return fci(*test, opts);

        std::ifstream in(c.skeleton, std::ios::binary);
        if (!in) throw IoError("cannot open skeleton file '" + c.skeleton + "'");
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw IoError("skeleton '" + c.skeleton + "': " + e.what());
        }
        const MixedGraph full = graph_from_json(j.contains("graph") ? j["graph"] : j);
        for (const auto& n : full.nodes())
            if (std::find(dataset_names.begin(), dataset_names.end(), n) == dataset_names.end())
                throw InvalidArgument("skeleton node '" + n + "' is not a dataset column");
        // Selected variables only; those missing from the skeleton stay isolated.
        MixedGraph skel(data.names());
        for (const auto& e : full.edges()) {
            auto a = skel.find(full.name(e.a));
            auto b = skel.find(full.name(e.b));
            if (a && b) skel.add_undirected(*a, *b);
        }
        return pc_on_skeleton(skel, *test, opts);
    }
    auto score = make_score(c.score, data, ScoreOptions{c.penalty_discount, c.ess});
    if (c.algorithm == "ges") return ges(*score);
    return fges(*score, threads);
}

}  // namespace

RunReport run_pipeline(const PipelineConfig& config, const RunOptions& options) {
    const auto started = std::chrono::steady_clock::now();
    stage("config", [&] { validate(config); });
    RunReport rep;
    rep.config = config;
    rep.output_dir = config.output_dir.empty() ? default_output_dir() : config.output_dir;
    const unsigned threads = std::max(1u, options.threads);

    LoadResult loaded = stage("load", [&] { return load_csv(config.dataset, config.target); });
    const DataTable& table = loaded.table;

    Selection sel = stage("select", [&] { return select_features(table, config, threads); });
    rep.selected = sel.names;
    const DataTable data = table.select(sel.names);

    rep.search = stage("discover", [&] { return discover(data, table.names(), config, threads); });

    rep.claims = stage("claims", [&] {
        if (config.target.empty() || !rep.search.graph.find(config.target)) return std::vector<Claim>{};
        ClaimProvenance prov;
        prov.algorithm = config.algorithm;
        prov.test_or_score = config.constraint_based() ? config.test : config.score;
        prov.alpha = config.constraint_based() ? config.alpha : 0.0;
        prov.graph_file = "graph.json";
        return edges_to_claims(rep.search.graph, config.target, data.metas(), prov);
    });

    stage("export", [&] {
        std::error_code ec;
        fs::create_directories(rep.output_dir, ec);
        if (ec) throw IoError("cannot create output directory '" + rep.output_dir + "': " + ec.message());
        OutputSet out(rep.output_dir);
        rep.manifest = {"graph.dot", "graph.json", "search.json", "selection.json", "claims.json", "timing.log",
                        "report.json"};

        nlohmann::ordered_json report;
        report["config"] = config_to_json(config);
        report["dataset"] = {{"path", config.dataset},
                             {"rows", table.n_rows()},
                             {"columns", table.n_cols()},
                             {"rows_read", loaded.report.rows_read},
                             {"rows_dropped", loaded.report.rows_dropped},
                             {"warnings", loaded.report.warnings}};
        report["selection"] = {{"method", config.selection_method}, {"selected", rep.selected}};
        report["discovery"] = {{"algorithm", rep.search.algorithm},
                               {"nodes", rep.search.graph.size()},
                               {"edges", rep.search.graph.num_edges()},
                               {"tests_run", rep.search.tests_run},
                               {"score_evaluations", rep.search.score_evaluations}};
        if (rep.search.score_total)
            report["discovery"]["score_total"] = *rep.search.score_total;
        report["claims"] = rep.claims.size();
        report["manifest"] = rep.manifest;
        rep.report = report;

        out.write("graph.dot", to_dot(rep.search.graph));
        out.write("graph.json", dump(graph_to_json(rep.search.graph)));
        out.write("search.json", dump(search_result_to_json(rep.search)));
        out.write("selection.json", dump(sel.json));
        out.write("claims.json", dump(claims_to_json(rep.claims)));
        rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        std::ostringstream timing;
        timing << "wall_seconds " << rep.wall_seconds << "\nthreads " << threads << "\n";
        out.write("timing.log", timing.str());
        out.write("report.json", dump(report));
        out.commit();
    });
    return rep;
}

}  // namespace omicause
