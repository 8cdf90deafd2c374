#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "pipeline/pipeline.hpp"
#include "util/error.hpp"

namespace omicause {

namespace {

int parse_int(const std::string& key, const std::string& v) {
    int out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) throw InvalidArgument(key + ": expected an integer, got '" + v + "'");
    return out;
}

double parse_double(const std::string& key, const std::string& v) {
    double out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) throw InvalidArgument(key + ": expected a number, got '" + v + "'");
    return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw InvalidArgument(key + ": expected true or false, got '" + v + "'");
}

std::optional<int> parse_cap(const std::string& key, const std::string& v) {
    if (v == "none" || v == "unlimited" || v == "null") return std::nullopt;
    return parse_int(key, v);
}

bool one_of(const std::string& v, std::initializer_list<const char*> options) {
    for (const char* o : options)
        if (v == o) return true;
    return false;
}

nlohmann::ordered_json cap_json(const std::optional<int>& c) {
    return c ? nlohmann::ordered_json(*c) : nlohmann::ordered_json(nullptr);
}

}  // namespace

void set_config_value(PipelineConfig& c, const std::string& key, const std::string& v) {
    if (key == "data.dataset") c.dataset = v;
    else if (key == "data.target") c.target = v;
    else if (key == "selection.method") c.selection_method = v;
    else if (key == "selection.max_features") c.max_features = parse_int(key, v);
    else if (key == "selection.test") c.selection_test = v;
    else if (key == "selection.alpha") c.selection_alpha = parse_double(key, v);
    else if (key == "selection.max_cond_set_size") c.selection_max_cond_set_size = parse_cap(key, v);
    else if (key == "selection.mi_neighbors") c.mi_neighbors = parse_int(key, v);
    else if (key == "discovery.algorithm") c.algorithm = v;
    else if (key == "discovery.test") c.test = v;
    else if (key == "discovery.score") c.score = v;
    else if (key == "discovery.alpha") c.alpha = parse_double(key, v);
    else if (key == "discovery.max_cond_set_size") c.max_cond_set_size = parse_cap(key, v);
    else if (key == "discovery.stable") c.stable = parse_bool(key, v);
    else if (key == "discovery.penalty_discount") c.penalty_discount = parse_double(key, v);
    else if (key == "discovery.ess") c.ess = parse_double(key, v);
    else if (key == "discovery.skeleton") c.skeleton = v;
    else if (key == "discovery.rcit_features") c.rcit_features = parse_int(key, v);
    else if (key == "discovery.rcit_conditioning_features") c.rcit_conditioning_features = parse_int(key, v);
    else if (key == "run.seed") {
        std::uint64_t s = 0;
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), s);
        if (ec != std::errc() || p != v.data() + v.size()) throw InvalidArgument(key + ": expected a non-negative integer");
        c.seed = s;
    } else if (key == "run.output_dir") c.output_dir = v;
    else throw InvalidArgument("unknown config key '" + key + "'");
}

void validate(const PipelineConfig& c) {
    if (c.dataset.empty()) throw InvalidArgument("data.dataset is required");
    if (!one_of(c.selection_method, {"mi", "mmmb", "none"}))
        throw InvalidArgument("selection.method must be mi, mmmb or none");
    if (c.selection_method != "none" && c.target.empty())
        throw InvalidArgument("selection.method " + c.selection_method + " needs data.target");
    if (c.max_features < 1) throw InvalidArgument("selection.max_features must be at least 1");
    if (!one_of(c.selection_test, {"chi-square", "cg-lrt", "rcit"}))
        throw InvalidArgument("selection.test must be chi-square, cg-lrt or rcit");
    if (!(c.selection_alpha > 0 && c.selection_alpha < 1)) throw InvalidArgument("selection.alpha must lie in (0, 1)");
    if (c.selection_max_cond_set_size && *c.selection_max_cond_set_size < 0)
        throw InvalidArgument("selection.max_cond_set_size must be non-negative");
    if (c.mi_neighbors < 1) throw InvalidArgument("selection.mi_neighbors must be positive");
    if (!one_of(c.algorithm, {"pc", "fci", "ges", "fges", "pc_on_skeleton"}))
        throw InvalidArgument("discovery.algorithm must be pc, fci, ges, fges or pc_on_skeleton");
    if (!one_of(c.test, {"chi-square", "cg-lrt", "rcit"}))
        throw InvalidArgument("discovery.test must be chi-square, cg-lrt or rcit");
    if (!one_of(c.score, {"discrete-bic", "bdeu", "cg-bic"}))
        throw InvalidArgument("discovery.score must be discrete-bic, bdeu or cg-bic");
    if (!(c.alpha > 0 && c.alpha < 1)) throw InvalidArgument("discovery.alpha must lie in (0, 1)");
    if (c.max_cond_set_size && *c.max_cond_set_size < 0)
        throw InvalidArgument("discovery.max_cond_set_size must be non-negative");
    if (!(c.penalty_discount > 0)) throw InvalidArgument("discovery.penalty_discount must be positive");
    if (!(c.ess > 0)) throw InvalidArgument("discovery.ess must be positive");
    if (c.algorithm == "pc_on_skeleton" && c.skeleton.empty())
        throw InvalidArgument("pc_on_skeleton needs discovery.skeleton");
    if (c.rcit_features < 1 || c.rcit_conditioning_features < 1)
        throw InvalidArgument("rcit feature counts must be positive");
}

PipelineConfig parse_config_ini(const std::string& text) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw IoError("config: " + std::string(e.what()));
    }
    PipelineConfig c;
    for (const auto& [section, body] : tree) {
        if (body.empty()) throw InvalidArgument("config key '" + section + "' outside a section");
        for (const auto& [key, value] : body) set_config_value(c, section + "." + key, value.get_value<std::string>());
    }
    return c;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    if (path.size() >= 5 && path.ends_with(".json")) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(buf.str());
        } catch (const nlohmann::json::exception& e) {
            throw IoError("config '" + path + "': " + e.what());
        }
        // A run report embeds its effective config under "config".
        if (j.contains("config") && j["config"].is_object()) j = j["config"];
        return config_from_json(j);
    }
    return parse_config_ini(buf.str());
}

nlohmann::ordered_json config_to_json(const PipelineConfig& c) {
    nlohmann::ordered_json j;
    j["data"] = {{"dataset", c.dataset}, {"target", c.target}};
    j["selection"] = {{"method", c.selection_method},
                      {"max_features", c.max_features},
                      {"test", c.selection_test},
                      {"alpha", c.selection_alpha},
                      {"max_cond_set_size", cap_json(c.selection_max_cond_set_size)},
                      {"mi_neighbors", c.mi_neighbors}};
    j["discovery"] = {{"algorithm", c.algorithm},
                      {"test", c.test},
                      {"score", c.score},
                      {"alpha", c.alpha},
                      {"max_cond_set_size", cap_json(c.max_cond_set_size)},
                      {"stable", c.stable},
                      {"penalty_discount", c.penalty_discount},
                      {"ess", c.ess},
                      {"skeleton", c.skeleton},
                      {"rcit_features", c.rcit_features},
                      {"rcit_conditioning_features", c.rcit_conditioning_features}};
    j["run"] = {{"seed", c.seed}};
    return j;
}

PipelineConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InvalidArgument("config JSON must be an object");
    PipelineConfig c;
    for (const auto& [section, body] : j.items()) {
        if (!body.is_object()) throw InvalidArgument("config section '" + section + "' must be an object");
        for (const auto& [key, value] : body.items()) {
            std::string text;
            if (value.is_string()) text = value.get<std::string>();
            else if (value.is_null()) text = "none";
            else text = value.dump();
            set_config_value(c, section + "." + key, text);
        }
    }
    return c;
}

std::string default_output_dir() {
    if (const char* env = std::getenv("OMICAUSE_OUTPUT_DIR"); env && *env) return env;
    return "omicause_out";
}

}  // namespace omicause
