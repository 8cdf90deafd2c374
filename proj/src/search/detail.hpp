#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "graph/mixed_graph.hpp"
#include "graph/orientation.hpp"
#include "indep/ci_test.hpp"
#include "search/search.hpp"

namespace omicause::detail {

// Runs CI tests on behalf of one search over local node indices, translating
// to the test's variable indices, memoizing, and logging each distinct query.
class TestRunner {
public:
    TestRunner(const IndependenceTest& test, std::vector<int> vars, nlohmann::ordered_json& log);

    const CITestResult& run(int a, int b, const std::vector<int>& z);
    std::size_t distinct() const { return memo_.size(); }
    const std::vector<std::string>& names() const { return names_; }

private:
    const IndependenceTest& test_;
    std::vector<int> vars_;
    std::vector<std::string> names_;
    nlohmann::ordered_json& log_;
    std::map<TestCacheKey, CITestResult> memo_;
};

// Validates `vars` against the test (empty: all variables).
std::vector<int> resolve_vars(const IndependenceTest& test, const std::vector<int>& vars);

nlohmann::ordered_json name_list(const MixedGraph& g, const std::vector<int>& nodes);

// Level-wise edge removal on `g` (undirected). Records sepsets for every
// removed pair.
void adjacency_search(MixedGraph& g, TestRunner& runner, const PcOptions& opts, SepSetMap& sepsets,
                      nlohmann::ordered_json& log);

void check_options(const PcOptions& opts);

}  // namespace omicause::detail
