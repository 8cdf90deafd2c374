#pragma once

#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pipeline/claims.hpp"
#include "search/search.hpp"
#include "util/error.hpp"

namespace omicause {

struct PipelineConfig {
    // [data]
    std::string dataset;
    std::string target;  // empty: no target, no claims

    // [selection]
    std::string selection_method = "none";  // mi | mmmb | none
    int max_features = 10;                  // including the target
    std::string selection_test = "chi-square";
    double selection_alpha = 0.05;
    std::optional<int> selection_max_cond_set_size = 3;
    int mi_neighbors = 3;

    // [discovery]
    std::string algorithm = "pc";  // pc | fci | ges | fges | pc_on_skeleton
    std::string test = "chi-square";
    std::string score = "discrete-bic";
    double alpha = 0.05;
    std::optional<int> max_cond_set_size = 3;
    bool stable = true;
    double penalty_discount = 1.0;
    double ess = 1.0;
    std::string skeleton;  // graph JSON, pc_on_skeleton only
    int rcit_features = 5;
    int rcit_conditioning_features = 100;

    // [run]
    std::uint64_t seed = 0;
    std::string output_dir;  // empty: $OMICAUSE_OUTPUT_DIR, else ./omicause_out

    bool constraint_based() const { return algorithm == "pc" || algorithm == "fci" || algorithm == "pc_on_skeleton"; }
};

// Checks identifiers and ranges. Throws InvalidArgument.
void validate(const PipelineConfig& c);

// INI text with [data], [selection], [discovery] and [run] sections. Unknown
// keys are rejected.
PipelineConfig parse_config_ini(const std::string& text);

// Reads INI, or the JSON form when the path ends in .json.
PipelineConfig load_config(const std::string& path);

// JSON form with the same section/key names. output_dir is not included: it
// names where a run is written, not what it computes.
nlohmann::ordered_json config_to_json(const PipelineConfig& c);
PipelineConfig config_from_json(const nlohmann::json& j);

// Sets one "section.key" value from its text form (CLI overrides).
void set_config_value(PipelineConfig& c, const std::string& dotted_key, const std::string& value);

struct RunOptions {
    unsigned threads = 1;  // never affects outputs
};

struct RunReport {
    PipelineConfig config;
    std::vector<std::string> selected;
    SearchResult search;
    std::vector<Claim> claims;
    std::vector<std::string> manifest;  // file names inside the output directory
    std::string output_dir;
    double wall_seconds = 0.0;
    nlohmann::ordered_json report;      // report.json content
};

// A failure inside one pipeline stage; what() starts with the stage name and
// cause() holds the original exception.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& message, std::exception_ptr cause)
        : Error(stage + ": " + message), stage_(std::move(stage)), cause_(std::move(cause)) {}
    const std::string& stage() const { return stage_; }
    const std::exception_ptr& cause() const { return cause_; }

private:
    std::string stage_;
    std::exception_ptr cause_;
};

// load -> select -> discover -> claims -> export. Writes graph.dot, graph.json,
// search.json, selection.json, claims.json, report.json and timing.log to the
// output directory. On failure the files written so far are removed and a
// StageError is thrown.
RunReport run_pipeline(const PipelineConfig& config, const RunOptions& options = {});

std::string default_output_dir();

}  // namespace omicause
