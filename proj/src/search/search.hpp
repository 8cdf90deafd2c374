#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "graph/mixed_graph.hpp"
#include "graph/orientation.hpp"
#include "indep/ci_test.hpp"
#include "scores/local_score.hpp"

namespace omicause {

struct PcOptions {
    double alpha = 0.05;
    std::optional<int> max_cond_set_size;  // nullopt: unlimited
    bool stable = true;

    // Conditioning sets capped at 3 (small-sample data runs).
    static PcOptions for_data(double alpha = 0.05) { return {alpha, 3, true}; }
    static PcOptions for_oracle() { return {0.05, std::nullopt, true}; }
};

struct SearchResult {
    std::string algorithm;
    MixedGraph graph;               // CPDAG (pc, ges, fges) or PAG (fci)
    SepSetMap sepsets;              // constraint-based only
    std::optional<double> score_total;  // score-based only
    // One JSON object per decision, in order: tests, removals, colliders,
    // orientations, operators.
    nlohmann::ordered_json log = nlohmann::ordered_json::array();
    std::size_t tests_run = 0;         // distinct CI tests
    std::size_t score_evaluations = 0; // distinct local scores
};

// `vars` selects the test's variables to search over (empty: all of them);
// result nodes follow that order.
SearchResult pc(const IndependenceTest& test, const PcOptions& opts, const std::vector<int>& vars = {});

// PC starting from the given undirected skeleton instead of the complete graph.
// Skeleton nodes are matched to test variables by name. Edges are only ever
// removed. Nonadjacent pairs that the skeleton phase never tested but that form
// an unshielded triple get a separating set searched among the adjacencies of
// either endpoint.
SearchResult pc_on_skeleton(const MixedGraph& skeleton, const IndependenceTest& test, const PcOptions& opts);

// FCI: PC adjacency search, Possible-D-SEP pruning, collider orientation on
// the final sepsets, then orientation rules R1-R4 (R4: discriminating paths).
SearchResult fci(const IndependenceTest& test, const PcOptions& opts, const std::vector<int>& vars = {});

// Greedy equivalence search with Insert/Delete operators over CPDAGs.
SearchResult ges(const ScoreFunction& score);

// Same search with operator deltas evaluated on `parallelism` threads and a
// deterministic reduction (max delta, then lowest operator index).
SearchResult fges(const ScoreFunction& score, unsigned parallelism);

// Possible-D-SEP(a) in a partially oriented graph: nodes reachable from a along
// paths where every inner node is a collider or sits in a triangle with its
// path neighbours. Excludes a.
std::vector<int> possible_dsep(const MixedGraph& g, int a);

// FCI orientation rules R1-R4 to fixed point. Appends "orient" events to log
// when given.
MixedGraph apply_fci_rules(MixedGraph g, const SepSetMap& sepsets, nlohmann::ordered_json* log = nullptr);

nlohmann::ordered_json search_result_to_json(const SearchResult& r);

}  // namespace omicause
