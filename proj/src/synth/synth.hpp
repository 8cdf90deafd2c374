#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "graph/metrics.hpp"
#include "graph/mixed_graph.hpp"
#include "tabular/data_table.hpp"

namespace omicause {

struct SimSpec {
    int n_nodes = 0;
    // Exactly one of these: edge probability for every ordered pair, or the
    // expected number of neighbours per node.
    std::optional<double> edge_density;
    std::optional<double> expected_degree;
    std::vector<VariableKind> kinds;  // per node; empty: all binary
    std::size_t n_rows = 0;
    std::uint64_t seed = 0;
};

// Node names used by the simulators: X1, X2, ...
std::vector<std::string> sim_node_names(int n);

// Random topological order, then each earlier-to-later pair edged
// independently. Node indices follow the names, not the order.
MixedGraph random_dag(const SimSpec& spec);

// Categorical data: one Dirichlet(0.5) distribution per node and parent
// configuration, rows drawn by ancestral sampling. Levels are labelled s0, s1, ...
DataTable simulate_discrete(const MixedGraph& dag, const std::vector<int>& cardinalities, std::size_t n_rows,
                            std::uint64_t seed);

// Conditional-Gaussian data. Continuous nodes: linear in continuous parents
// (weights +/-U[0.5, 1.5]) plus an intercept per discrete-parent configuration
// and N(0, 1) noise, then standardized. Categorical nodes: softmax of per-level
// linear scores.
DataTable simulate_cg(const MixedGraph& dag, const std::vector<VariableKind>& kinds, std::size_t n_rows,
                      std::uint64_t seed);

// The table without the named columns (latent variables for FCI checks).
DataTable hide_nodes(const DataTable& table, const std::vector<std::string>& hidden);

struct MetricsReport {
    GraphComparison comparison;  // estimated vs. CPDAG of the truth
    int true_edges = 0;          // in the truth DAG
};

MetricsReport evaluate(const MixedGraph& estimated, const MixedGraph& truth);

nlohmann::ordered_json metrics_to_json(const MetricsReport& m);
std::string metrics_csv_header();
std::string metrics_csv_row(const std::string& label, const MetricsReport& m);

}  // namespace omicause
