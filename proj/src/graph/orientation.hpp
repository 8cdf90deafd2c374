#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "graph/mixed_graph.hpp"

namespace omicause {

// Unordered node pair -> the conditioning set that separated it.
class SepSetMap {
public:
    void set(int a, int b, std::vector<int> sepset);
    bool contains(int a, int b) const { return map_.contains(key(a, b)); }
    const std::vector<int>& get(int a, int b) const;  // throws InvalidArgument if absent
    bool separates_with(int a, int b, int v) const;
    std::size_t size() const { return map_.size(); }
    const std::map<std::pair<int, int>, std::vector<int>>& entries() const { return map_; }

private:
    static std::pair<int, int> key(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }
    std::map<std::pair<int, int>, std::vector<int>> map_;
};

struct OrientationResult {
    MixedGraph graph;
    std::vector<std::string> warnings;
};

// For every unshielded triple a *-* b *-* c (a, c nonadjacent) whose sepset
// does not contain b, puts arrowheads at b on both edges. Triples are visited
// with a < c in canonical order, then b ascending.
//
// When allow_bidirected is false a triple that would put an arrowhead against
// an existing one (a <- b or b -> c already) is skipped and a warning recorded;
// the first orientation wins.
OrientationResult orient_v_structures(const MixedGraph& skeleton, const SepSetMap& sepsets,
                                      bool allow_bidirected = false);

struct MeekStep {
    int from = 0;
    int to = 0;
    int rule = 0;  // 1..4
};

// Meek rules R1-R4 to fixed point on a PDAG (Tail/Arrow marks only). Each
// orientation is appended to `steps` when given.
MixedGraph apply_meek_rules(const MixedGraph& pdag, std::vector<MeekStep>* steps = nullptr);

// CPDAG of the Markov equivalence class of a DAG.
MixedGraph dag_to_cpdag(const MixedGraph& dag);

// A consistent DAG extension of a PDAG (same skeleton, same directed edges, no
// new v-structures), built with the Dor-Tarsi sink-elimination procedure.
// nullopt when none exists.
std::optional<MixedGraph> pdag_to_dag(const MixedGraph& pdag);

// Unshielded colliders a -> b <- c as (a, b, c) with a < c.
std::vector<std::tuple<int, int, int>> v_structures(const MixedGraph& g);

// d-separation of x and y given z in a DAG (reachability / "Bayes ball").
bool d_separated(const MixedGraph& dag, int x, int y, const std::vector<int>& z);

}  // namespace omicause
