#include "graph/metrics.hpp"

#include "util/error.hpp"

namespace omicause {

GraphComparison compare_graphs(const MixedGraph& est, const MixedGraph& ref) {
    if (est.nodes() != ref.nodes()) throw GraphError("graphs have different node sets");
    GraphComparison r;
    const int n = est.size();
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            const bool ea = est.adjacent(a, b);
            const bool ra = ref.adjacent(a, b);
            r.estimated_adjacencies += ea;
            r.true_adjacencies += ra;
            const bool same_marks = est.endpoint(a, b) == ref.endpoint(a, b) && est.endpoint(b, a) == ref.endpoint(b, a);
            if (!same_marks) ++r.shd;
            if (ea && ra) {
                ++r.shared_adjacencies;
                if (same_marks) ++r.shared_same_marks;
            }
        }
    }
    if (r.estimated_adjacencies > 0)
        r.adjacency_precision = static_cast<double>(r.shared_adjacencies) / r.estimated_adjacencies;
    else
        r.precision_undefined = true;
    if (r.true_adjacencies > 0)
        r.adjacency_recall = static_cast<double>(r.shared_adjacencies) / r.true_adjacencies;
    else
        r.recall_undefined = true;
    const double pr = r.adjacency_precision + r.adjacency_recall;
    r.adjacency_f1 = pr > 0 ? 2 * r.adjacency_precision * r.adjacency_recall / pr : 0.0;
    if (r.shared_adjacencies > 0)
        r.orientation_accuracy = static_cast<double>(r.shared_same_marks) / r.shared_adjacencies;
    else
        r.orientation_undefined = true;
    return r;
}

}  // namespace omicause
