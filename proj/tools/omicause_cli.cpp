// omicause command-line front end. Talks to the library only through the C API.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "omicause/omicause.h"

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

struct Failure {
    std::string message;
};

struct TableDeleter {
    void operator()(omc_table* t) const { omc_table_free(t); }
};
struct GraphDeleter {
    void operator()(omc_graph* g) const { omc_graph_free(g); }
};
using Table = std::unique_ptr<omc_table, TableDeleter>;
using Graph = std::unique_ptr<omc_graph, GraphDeleter>;

void check(omc_status s) {
    if (s != OMC_OK) throw Failure{std::string(omc_status_name(s)) + ": " + omc_last_error()};
}

std::string take(char* s) {
    std::string out = s ? s : "";
    omc_string_free(s);
    return out;
}

std::string pretty(const std::string& text) { return json::parse(text).dump(2) + "\n"; }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure{"cannot open '" + path + "'"};
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Failure{"cannot write '" + path.string() + "'"};
    out << content;
}

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty()) std::cout << content;
    else write_file(out_path, content);
}

std::string default_output_dir() {
    if (const char* env = std::getenv("OMICAUSE_OUTPUT_DIR"); env && *env) return env;
    return "omicause_out";
}

std::string kinds_json(const std::vector<std::string>& kinds) {
    json k = json::object();
    for (const auto& spec : kinds) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos) throw Failure{"--kind expects column=continuous|categorical, got '" + spec + "'"};
        k[spec.substr(0, eq)] = spec.substr(eq + 1);
    }
    return k.dump();
}

Table load_table(const std::string& path, const std::string& target, const std::vector<std::string>& kinds) {
    omc_table* t = nullptr;
    check(omc_table_load_csv(path.c_str(), target.c_str(), kinds_json(kinds).c_str(), &t, nullptr));
    return Table(t);
}

Graph load_graph(const std::string& path) {
    omc_graph* g = nullptr;
    check(omc_graph_from_json(read_file(path).c_str(), &g));
    return Graph(g);
}

// --- subcommands ---

struct IngestArgs {
    std::string data, target, out;
    std::vector<std::string> kinds;
};

int run_ingest(const IngestArgs& a) {
    omc_table* raw = nullptr;
    char* report = nullptr;
    check(omc_table_load_csv(a.data.c_str(), a.target.c_str(), kinds_json(a.kinds).c_str(), &raw, &report));
    Table t(raw);
    json out = json::parse(take(report));
    char* info = nullptr;
    check(omc_table_info_json(t.get(), &info));
    out["table"] = json::parse(take(info));
    if (!a.out.empty()) check(omc_table_write_csv(t.get(), a.out.c_str()));
    std::cout << out.dump(2) << "\n";
    return kOk;
}

struct SummarizeArgs {
    std::string data, target, out;
    std::vector<std::string> columns, kinds;
    bool split = false;
};

int run_summarize(const SummarizeArgs& a) {
    Table t = load_table(a.data, a.target, a.kinds);
    std::vector<std::string> columns = a.columns;
    if (columns.empty()) {
        char* info = nullptr;
        check(omc_table_info_json(t.get(), &info));
        for (const auto& c : json::parse(take(info))["columns"]) columns.push_back(c["name"]);
    }
    json out = json::array();
    for (const auto& c : columns) {
        char* s = nullptr;
        check(omc_table_summary_json(t.get(), c.c_str(), a.split ? 1 : 0, &s));
        out.push_back(json::parse(take(s)));
    }
    emit(out.dump(2) + "\n", a.out);
    return kOk;
}

struct SelectArgs {
    std::string data, target, method = "mi", test = "chi-square", max_cond = "3", out;
    std::vector<std::string> kinds;
    int max_features = 10, neighbors = 3;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

json cap_value(const std::string& text) {
    if (text == "none" || text == "unlimited" || text == "null") return nullptr;
    try {
        std::size_t used = 0;
        const int v = std::stoi(text, &used);
        if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
    throw Failure{"conditioning-set cap must be an integer or 'none', got '" + text + "'"};
}

int run_select(const SelectArgs& a) {
    Table t = load_table(a.data, a.target, a.kinds);
    const json o{{"method", a.method},     {"target", a.target},   {"max_features", a.max_features},
                 {"test", a.test},         {"alpha", a.alpha},     {"max_cond_set_size", cap_value(a.max_cond)},
                 {"neighbors", a.neighbors}, {"seed", a.seed},     {"threads", a.threads}};
    char* r = nullptr;
    check(omc_select_features(t.get(), o.dump().c_str(), &r));
    emit(pretty(take(r)), a.out);
    return kOk;
}

struct DiscoverArgs {
    std::string config;
    std::vector<std::string> sets;
    std::string dataset, target, selection, algorithm, test, score, alpha, skeleton, seed, output_dir;
    unsigned threads = 1;
};

int run_discover(const DiscoverArgs& a) {
    json overrides = json::object();
    for (const auto& s : a.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || s.find('.') > eq)
            throw Failure{"--set expects section.key=value, got '" + s + "'"};
        overrides[s.substr(0, eq)] = s.substr(eq + 1);
    }
    const std::pair<const char*, const std::string*> flags[] = {
        {"data.dataset", &a.dataset},       {"data.target", &a.target},       {"selection.method", &a.selection},
        {"discovery.algorithm", &a.algorithm}, {"discovery.test", &a.test},   {"discovery.score", &a.score},
        {"discovery.alpha", &a.alpha},      {"discovery.skeleton", &a.skeleton}, {"run.seed", &a.seed},
        {"run.output_dir", &a.output_dir}};
    for (const auto& [key, value] : flags)
        if (!value->empty()) overrides[key] = *value;
    char* r = nullptr;
    check(omc_run_pipeline(a.config.empty() ? nullptr : a.config.c_str(), overrides.dump().c_str(), a.threads, &r));
    json report = json::parse(take(r));
    report.erase("wall_seconds");
    std::cout << report.dump(2) << "\n";
    return kOk;
}

struct ClaimsArgs {
    std::string graph, target, data, out, algorithm, test_or_score;
    double alpha = 0.0;
};

int run_claims(const ClaimsArgs& a) {
    Graph g = load_graph(a.graph);
    Table t;
    if (!a.data.empty()) t = load_table(a.data, a.target, {});
    const json prov{{"algorithm", a.algorithm},
                    {"test_or_score", a.test_or_score},
                    {"alpha", a.alpha},
                    {"graph_file", fs::path(a.graph).filename().string()}};
    char* r = nullptr;
    check(omc_claims_json(g.get(), t.get(), a.target.c_str(), prov.dump().c_str(), &r));
    emit(pretty(take(r)), a.out);
    return kOk;
}

struct SimulateArgs {
    int nodes = 5, cardinality = 3;
    std::size_t rows = 1000;
    std::uint64_t seed = 0;
    double degree = 2.0, density = -1.0, categorical_fraction = 0.0;
    std::string type = "discrete", out_dir;
};

int run_simulate(const SimulateArgs& a) {
    json spec{{"nodes", a.nodes}, {"rows", a.rows}, {"seed", a.seed}, {"type", a.type}, {"cardinality", a.cardinality},
              {"categorical_fraction", a.categorical_fraction}};
    if (a.density >= 0) spec["edge_density"] = a.density;
    else spec["expected_degree"] = a.degree;
    omc_table* raw_t = nullptr;
    omc_graph* raw_g = nullptr;
    check(omc_simulate(spec.dump().c_str(), &raw_t, &raw_g));
    Table t(raw_t);
    Graph g(raw_g);

    const fs::path dir = a.out_dir.empty() ? default_output_dir() : a.out_dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Failure{"cannot create '" + dir.string() + "': " + ec.message()};
    const fs::path data = dir / "data.csv", truth = dir / "truth.json", dot = dir / "truth.dot";
    check(omc_table_write_csv(t.get(), data.string().c_str()));
    char* j = nullptr;
    check(omc_graph_to_json(g.get(), &j));
    write_file(truth, pretty(take(j)));
    char* d = nullptr;
    check(omc_graph_to_dot(g.get(), &d));
    write_file(dot, take(d));
    std::cout << json{{"data", data.string()}, {"truth", truth.string()}, {"dot", dot.string()}}.dump(2) << "\n";
    return kOk;
}

struct EvaluateArgs {
    std::string est, truth;
};

int run_evaluate(const EvaluateArgs& a) {
    Graph est = load_graph(a.est);
    Graph truth = load_graph(a.truth);
    char* r = nullptr;
    check(omc_evaluate(est.get(), truth.get(), &r));
    std::cout << pretty(take(r));
    return kOk;
}

struct VerifyArgs {
    std::string claims, model;
};

std::vector<std::string> verifier_command() {
    const char* env = std::getenv("OMICAUSE_VERIFIER");
    std::vector<std::string> cmd;
    if (env && *env) {
        std::istringstream words(env);
        for (std::string w; words >> w;) cmd.push_back(w);
    }
    if (cmd.empty()) cmd = {"python3", "-m", "llm_verifier"};
    return cmd;
}

int run_verify(const VerifyArgs& a) {
    const json claims = json::parse(read_file(a.claims), nullptr, false);
    if (claims.is_discarded() || !claims.contains("claims") || !claims["claims"].is_array())
        throw Failure{"'" + a.claims + "' is not a claims file"};
    std::vector<std::string> cmd = verifier_command();
    for (const char* w : {"verify", "--claims", a.claims.c_str(), "--model", a.model.c_str()}) cmd.emplace_back(w);
    std::vector<char*> argv;
    for (auto& w : cmd) argv.push_back(w.data());
    argv.push_back(nullptr);

    std::fflush(stdout);
    const pid_t pid = fork();
    if (pid < 0) throw Failure{"cannot start verifier"};
    if (pid == 0) {
        execvp(argv[0], argv.data());
        std::fprintf(stderr, "omicause: cannot run verifier '%s'\n", argv[0]);
        _exit(127);
    }
    int status = 0;
    if (waitpid(pid, &status, 0) < 0) throw Failure{"lost the verifier process"};
    if (WIFEXITED(status) && WEXITSTATUS(status) == 0) return kOk;
    throw Failure{"verifier '" + cmd.front() + "' failed"};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"omicause: causal discovery on multi-omics tables"};
    app.require_subcommand(1);
    app.set_version_flag("--version", omc_version());

    IngestArgs ingest;
    auto* c_ingest = app.add_subcommand("ingest", "Load a CSV, report inferred kinds and dropped rows");
    c_ingest->add_option("--data", ingest.data, "Input CSV")->required();
    c_ingest->add_option("--target", ingest.target, "Target column");
    c_ingest->add_option("--kind", ingest.kinds, "Kind override, column=continuous|categorical");
    c_ingest->add_option("--out", ingest.out, "Write the cleaned table here");

    SummarizeArgs summarize;
    auto* c_sum = app.add_subcommand("summarize", "Per-column summary statistics");
    c_sum->add_option("--data", summarize.data, "Input CSV")->required();
    c_sum->add_option("--target", summarize.target, "Target column");
    c_sum->add_option("--column", summarize.columns, "Columns to summarize (default: all)");
    c_sum->add_option("--kind", summarize.kinds, "Kind override, column=continuous|categorical");
    c_sum->add_flag("--split", summarize.split, "Split counts and statistics by target level");
    c_sum->add_option("--out", summarize.out, "Output file (default: stdout)");

    SelectArgs select;
    auto* c_sel = app.add_subcommand("select", "Feature selection against a target");
    c_sel->add_option("--data", select.data, "Input CSV")->required();
    c_sel->add_option("--target", select.target, "Target column")->required();
    c_sel->add_option("--method", select.method, "mi or mmmb")->check(CLI::IsMember({"mi", "mmmb"}));
    c_sel->add_option("--max-features", select.max_features, "Number of features kept")->check(CLI::PositiveNumber);
    c_sel->add_option("--test", select.test, "Independence test for mmmb");
    c_sel->add_option("--alpha", select.alpha, "Significance level for mmmb");
    c_sel->add_option("--max-cond-set-size", select.max_cond, "Conditioning-set cap, or none");
    c_sel->add_option("--neighbors", select.neighbors, "k for the nearest-neighbour MI estimator");
    c_sel->add_option("--seed", select.seed, "Seed");
    c_sel->add_option("--threads", select.threads, "Worker threads");
    c_sel->add_option("--kind", select.kinds, "Kind override, column=continuous|categorical");
    c_sel->add_option("--out", select.out, "Output file (default: stdout)");

    DiscoverArgs discover;
    auto* c_dis = app.add_subcommand("discover", "Run the full pipeline from a config file");
    c_dis->add_option("--config", discover.config, "INI or JSON config");
    c_dis->add_option("--set", discover.sets, "Override, section.key=value");
    c_dis->add_option("--dataset", discover.dataset, "Overrides data.dataset");
    c_dis->add_option("--target", discover.target, "Overrides data.target");
    c_dis->add_option("--selection", discover.selection, "Overrides selection.method");
    c_dis->add_option("--algorithm", discover.algorithm, "Overrides discovery.algorithm");
    c_dis->add_option("--test", discover.test, "Overrides discovery.test");
    c_dis->add_option("--score", discover.score, "Overrides discovery.score");
    c_dis->add_option("--alpha", discover.alpha, "Overrides discovery.alpha");
    c_dis->add_option("--skeleton", discover.skeleton, "Overrides discovery.skeleton");
    c_dis->add_option("--seed", discover.seed, "Overrides run.seed");
    c_dis->add_option("--output-dir", discover.output_dir, "Overrides run.output_dir");
    c_dis->add_option("--threads", discover.threads, "Worker threads (outputs do not depend on it)");

    ClaimsArgs claims;
    auto* c_cl = app.add_subcommand("claims", "Render the target's edges as natural-language claims");
    c_cl->add_option("--graph", claims.graph, "Graph JSON")->required();
    c_cl->add_option("--target", claims.target, "Target node")->required();
    c_cl->add_option("--data", claims.data, "CSV supplying variable kinds");
    c_cl->add_option("--algorithm", claims.algorithm, "Provenance: algorithm");
    c_cl->add_option("--test-or-score", claims.test_or_score, "Provenance: test or score");
    c_cl->add_option("--alpha", claims.alpha, "Provenance: significance level");
    c_cl->add_option("--out", claims.out, "Output file (default: stdout)");

    SimulateArgs simulate;
    auto* c_sim = app.add_subcommand("simulate", "Sample a random DAG and data from it");
    c_sim->add_option("--nodes", simulate.nodes, "Number of nodes")->check(CLI::PositiveNumber);
    c_sim->add_option("--rows", simulate.rows, "Number of rows");
    c_sim->add_option("--seed", simulate.seed, "Seed");
    auto* deg = c_sim->add_option("--degree", simulate.degree, "Expected degree");
    c_sim->add_option("--density", simulate.density, "Edge probability")->excludes(deg);
    c_sim->add_option("--type", simulate.type, "discrete or cg")->check(CLI::IsMember({"discrete", "cg"}));
    c_sim->add_option("--cardinality", simulate.cardinality, "Levels per categorical node");
    c_sim->add_option("--categorical-fraction", simulate.categorical_fraction, "Share of categorical nodes (cg)");
    c_sim->add_option("--out-dir", simulate.out_dir, "Output directory");

    EvaluateArgs evaluate;
    auto* c_ev = app.add_subcommand("evaluate", "Compare an estimated graph with a true DAG");
    c_ev->add_option("--est", evaluate.est, "Estimated graph JSON")->required();
    c_ev->add_option("--truth", evaluate.truth, "True DAG JSON")->required();

    VerifyArgs verify;
    auto* c_ver = app.add_subcommand("verify", "Score claims with a language model (external verifier)");
    c_ver->add_option("--claims", verify.claims, "Claims JSON")->required();
    c_ver->add_option("--model", verify.model, "Model identifier")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (app.exit(e) == 0) return kOk;
        std::cerr << "\n" << app.help();
        return kUsageError;
    }

    try {
        if (*c_ingest) return run_ingest(ingest);
        if (*c_sum) return run_summarize(summarize);
        if (*c_sel) return run_select(select);
        if (*c_dis) return run_discover(discover);
        if (*c_cl) return run_claims(claims);
        if (*c_sim) return run_simulate(simulate);
        if (*c_ev) return run_evaluate(evaluate);
        if (*c_ver) return run_verify(verify);
    } catch (const Failure& f) {
        std::cerr << "omicause: " << f.message << "\n";
        return kDomainError;
    } catch (const std::exception& e) {
        std::cerr << "omicause: " << e.what() << "\n";
        return kDomainError;
    }
    return kDomainError;
}
