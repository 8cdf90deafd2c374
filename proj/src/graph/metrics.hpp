#pragma once

#include "graph/mixed_graph.hpp"

namespace omicause {

// Comparison of an estimated graph against a reference on the same node set.
struct GraphComparison {
    int shd = 0;  // node pairs whose (presence, marks) differ
    int estimated_adjacencies = 0;
    int true_adjacencies = 0;
    int shared_adjacencies = 0;
    int shared_same_marks = 0;
    double adjacency_precision = 1.0;
    double adjacency_recall = 1.0;
    double adjacency_f1 = 1.0;
    double orientation_accuracy = 1.0;  // among shared adjacencies
    // Set when a ratio had an empty denominator and was reported as 1.
    bool precision_undefined = false;
    bool recall_undefined = false;
    bool orientation_undefined = false;
};

// Throws GraphError when the node lists differ.
GraphComparison compare_graphs(const MixedGraph& estimated, const MixedGraph& reference);

inline int shd(const MixedGraph& g1, const MixedGraph& g2) { return compare_graphs(g1, g2).shd; }

}  // namespace omicause
