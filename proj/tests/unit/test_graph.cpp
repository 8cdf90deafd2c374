#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "graph/graph_io.hpp"
#include "graph/metrics.hpp"
#include "graph/orientation.hpp"
#include "support/oracles.hpp"
#include "synth/synth.hpp"
#include "util/error.hpp"

using namespace omicause;

namespace {

MixedGraph chain3() {
    MixedGraph g({"A", "B", "C"});
    g.add_directed(0, 1);
    g.add_directed(1, 2);
    return g;
}

MixedGraph collider3() {
    MixedGraph g({"A", "B", "C"});
    g.add_directed(0, 1);
    g.add_directed(2, 1);
    return g;
}

}  // namespace

TEST_CASE("marks are stored per endpoint") {
    MixedGraph g({"A", "B", "C"});
    g.add_directed(0, 1);
    CHECK(g.endpoint(0, 1) == Mark::Arrow);
    CHECK(g.endpoint(1, 0) == Mark::Tail);
    CHECK(g.is_directed(0, 1));
    CHECK_FALSE(g.is_directed(1, 0));
    CHECK(g.parents(1) == std::vector<int>{0});
    CHECK(g.children(0) == std::vector<int>{1});
    g.set_edge(1, 2, Mark::Circle, Mark::Arrow);
    CHECK(g.endpoint(2, 1) == Mark::Circle);
    CHECK(g.adjacents(1) == std::vector<int>{0, 2});
    CHECK(g.num_edges() == 2);
    g.remove_edge(0, 1);
    CHECK_FALSE(g.adjacent(0, 1));
    CHECK_THROWS(g.set_edge(0, 0, Mark::Tail, Mark::Tail));
    CHECK_THROWS(g.set_endpoint(0, 1, Mark::Arrow));
    CHECK_THROWS_AS(MixedGraph({"A", "A"}), InvalidArgument);
}

TEST_CASE("dag and pdag predicates") {
    CHECK(chain3().is_dag());
    MixedGraph cyc = chain3();
    cyc.add_directed(2, 0);
    CHECK(cyc.has_directed_cycle());
    CHECK_FALSE(cyc.is_dag());
    CHECK_THROWS_AS(require_dag(cyc), GraphError);
    MixedGraph pd = chain3();
    pd.add_undirected(0, 2);
    CHECK(pd.is_pdag());
    CHECK_FALSE(pd.is_dag());
}

TEST_CASE("d-separation agrees with the moral-graph criterion on every 4-node DAG") {
    int queries = 0;
    for (const auto& dag : oracle::all_dags(4)) {
        for (int x = 0; x < 4; ++x)
            for (int y = x + 1; y < 4; ++y) {
                std::vector<int> rest;
                for (int v = 0; v < 4; ++v)
                    if (v != x && v != y) rest.push_back(v);
                oracle::any_subset(rest, [&](const std::vector<int>& z) {
                    ++queries;
                    REQUIRE(d_separated(dag, x, y, z) == oracle::dsep_moral(dag, x, y, z));
                    return false;
                });
            }
    }
    CHECK(queries == 543 * 6 * 4);
}

TEST_CASE("d-separation agrees with the moral-graph criterion on random 8-node DAGs") {
    std::mt19937 rng(17);
    for (int i = 0; i < 40; ++i) {
        SimSpec s;
        s.n_nodes = 8;
        s.expected_degree = 3.0;
        s.seed = static_cast<std::uint64_t>(i);
        const MixedGraph dag = random_dag(s);
        for (int q = 0; q < 50; ++q) {
            const int x = static_cast<int>(rng() % 8), y = static_cast<int>(rng() % 8);
            if (x == y) continue;
            std::vector<int> z;
            for (int v = 0; v < 8; ++v)
                if (v != x && v != y && rng() % 3 == 0) z.push_back(v);
            REQUIRE(d_separated(dag, x, y, z) == oracle::dsep_moral(dag, x, y, z));
        }
    }
}

TEST_CASE("cpdag of small structures") {
    const MixedGraph chain = dag_to_cpdag(chain3());
    CHECK(chain.is_undirected(0, 1));
    CHECK(chain.is_undirected(1, 2));
    const MixedGraph coll = dag_to_cpdag(collider3());
    CHECK(coll.is_directed(0, 1));
    CHECK(coll.is_directed(2, 1));
    // A -> C <- B, C -> D: D's edge is compelled by R1.
    MixedGraph g({"A", "B", "C", "D"});
    g.add_directed(0, 2);
    g.add_directed(1, 2);
    g.add_directed(2, 3);
    CHECK(dag_to_cpdag(g) == g);
    CHECK(v_structures(g) == std::vector<std::tuple<int, int, int>>{{0, 2, 1}});
}

TEST_CASE("meek rules by hand") {
    SUBCASE("R1 propagates away from a collider") {
        MixedGraph g({"A", "B", "C"});
        g.add_directed(0, 1);
        g.add_undirected(1, 2);
        std::vector<MeekStep> steps;
        const MixedGraph out = apply_meek_rules(g, &steps);
        CHECK(out.is_directed(1, 2));
        REQUIRE(steps.size() == 1);
        CHECK(steps[0].rule == 1);
    }
    SUBCASE("R2 avoids a cycle") {
        MixedGraph g({"A", "B", "C"});
        g.add_directed(0, 1);
        g.add_directed(1, 2);
        g.add_undirected(0, 2);
        std::vector<MeekStep> steps;
        CHECK(apply_meek_rules(g, &steps).is_directed(0, 2));
        REQUIRE(steps.size() == 1);
        CHECK(steps[0].rule == 2);
    }
    SUBCASE("R3 with two colliding paths") {
        // A - B, A - C, A - D, C -> B <- D, C and D nonadjacent.
        MixedGraph g({"A", "B", "C", "D"});
        g.add_undirected(0, 1);
        g.add_undirected(0, 2);
        g.add_undirected(0, 3);
        g.add_directed(2, 1);
        g.add_directed(3, 1);
        std::vector<MeekStep> steps;
        const MixedGraph out = apply_meek_rules(g, &steps);
        CHECK(out.is_directed(0, 1));
        CHECK(out.is_undirected(0, 2));
        REQUIRE(steps.size() == 1);
        CHECK(steps[0].rule == 3);
    }
    SUBCASE("undirected graphs stay undirected") {
        MixedGraph g({"A", "B", "C"});
        g.add_undirected(0, 1);
        g.add_undirected(1, 2);
        CHECK(apply_meek_rules(g) == g);
    }
}

TEST_CASE("pdag extension") {
    MixedGraph g({"A", "B", "C"});
    g.add_directed(0, 1);
    g.add_undirected(1, 2);
    const auto d = pdag_to_dag(g);
    REQUIRE(d);
    CHECK(d->is_dag());
    CHECK(d->is_directed(0, 1));
    CHECK(d->is_directed(1, 2));
    // A chordless undirected 4-cycle has no orientation without a new collider.
    MixedGraph bad({"A", "B", "C", "D"});
    bad.add_undirected(0, 1);
    bad.add_undirected(1, 2);
    bad.add_undirected(2, 3);
    bad.add_undirected(3, 0);
    CHECK_FALSE(pdag_to_dag(bad));
}

TEST_CASE("sepset map is symmetric") {
    SepSetMap m;
    m.set(3, 1, {0, 2});
    CHECK(m.contains(1, 3));
    CHECK(m.get(1, 3) == std::vector<int>{0, 2});
    CHECK(m.separates_with(3, 1, 2));
    CHECK_FALSE(m.separates_with(1, 3, 4));
    CHECK_THROWS_AS(m.get(0, 1), InvalidArgument);
}

TEST_CASE("graph comparison") {
    const MixedGraph truth = dag_to_cpdag(collider3());
    const MixedGraph est = dag_to_cpdag(chain3());
    const GraphComparison c = compare_graphs(est, truth);
    CHECK(c.shd == 2);
    CHECK(c.shared_adjacencies == 2);
    CHECK(c.shared_same_marks == 0);
    CHECK(c.adjacency_f1 == 1.0);
    CHECK(c.orientation_accuracy == 0.0);

    MixedGraph empty({"A", "B", "C"});
    const GraphComparison e = compare_graphs(empty, truth);
    CHECK(e.precision_undefined);
    CHECK(e.adjacency_recall == 0.0);
    CHECK(e.shd == 2);
    CHECK_THROWS_AS(compare_graphs(MixedGraph({"A"}), truth), GraphError);
}

TEST_CASE("dot output matches the golden file") {
    MixedGraph g({"A", "B", "C", "D"});
    g.add_directed(0, 2);
    g.add_directed(1, 2);
    g.set_edge(1, 3, Mark::Circle, Mark::Tail);
    g.set_edge(2, 3, Mark::Arrow, Mark::Arrow);
    std::ifstream in(std::string(OMICAUSE_SOURCE_DIR) + "/tests/golden/mixed.dot");
    REQUIRE(in);
    std::stringstream want;
    want << in.rdbuf();
    CHECK(to_dot(g) == want.str());
}

TEST_CASE("graph json round trip and validation") {
    MixedGraph g({"A", "B", "C"});
    g.set_edge(0, 1, Mark::Circle, Mark::Arrow);
    g.add_undirected(1, 2);
    const auto j = graph_to_json(g);
    CHECK(j["edges"][0]["mark_a"] == "circle");
    CHECK(graph_from_json(nlohmann::json::parse(j.dump())) == g);
    CHECK_THROWS(graph_from_json(nlohmann::json::parse(R"({"nodes":["A"],"edges":[{"a":"A","b":"Z","mark_a":"tail","mark_b":"arrow"}]})")));
    CHECK_THROWS(graph_from_json(nlohmann::json::parse(R"({"nodes":["A","B"],"edges":[{"a":"A","b":"B","mark_a":"tail","mark_b":"spike"}]})")));
    CHECK_THROWS(graph_from_json(nlohmann::json::parse(R"({"edges":[]})")));
}
