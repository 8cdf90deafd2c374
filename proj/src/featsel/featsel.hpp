#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "indep/ci_test.hpp"
#include "tabular/data_table.hpp"

namespace omicause {

struct MiOptions {
    int k = 3;                // nearest neighbours for the continuous estimators
    std::uint64_t seed = 0;   // tie-breaking jitter
};

// Mutual information in nats. Plug-in estimate for two categorical columns,
// Kraskov (KSG) for two continuous ones, Ross's nearest-neighbour variant for
// a mixed pair. Negative estimates are clamped to 0. A constant column gives 0
// and a warning.
double mutual_information(const DataTable& table, std::size_t x, std::size_t y, const MiOptions& opts = {},
                          std::vector<std::string>* warnings = nullptr);

struct RankedFeature {
    std::string name;
    double mi = 0.0;
};

struct RankedFeatures {
    std::string target;
    std::vector<RankedFeature> ranking;  // every non-target column, MI descending
    std::vector<std::string> selected;   // target first, then the top k-1 features
    std::vector<std::string> warnings;
};

// Ties in MI keep column order. MI values are computed on up to `threads`
// workers; results do not depend on the thread count.
RankedFeatures mi_select(const DataTable& table, const std::string& target, int k, const MiOptions& opts = {},
                         unsigned threads = 1);

struct MbOptions {
    std::optional<int> max_cond_set_size = 3;  // nullopt: unlimited

    static MbOptions unlimited() { return {std::nullopt}; }
};

// Parents and children of `target` by max-min heuristic, backward pruning and
// the symmetry check (X kept only when target is also a candidate of X).
// Variables are test indices; the result is sorted.
std::vector<int> mmpc(const IndependenceTest& test, int target, const MbOptions& opts = {});

struct MarkovBlanket {
    int target = 0;
    std::vector<int> pc_set;
    std::vector<int> spouses;
    std::vector<int> full;  // pc_set and spouses, sorted
    // Strength of each member's association with the target (1 - p of the
    // deciding test).
    std::map<int, double> association;
};

MarkovBlanket mmmb(const IndependenceTest& test, int target, const MbOptions& opts = {});

// {method, target, alpha_or_k, selected, scores}
nlohmann::ordered_json selection_to_json(const RankedFeatures& r, int k);
nlohmann::ordered_json selection_to_json(const MarkovBlanket& mb, const IndependenceTest& test,
                                         const std::vector<std::string>& selected);

}  // namespace omicause
