#include <doctest.h>

#include "pipeline/claims.hpp"
#include "util/error.hpp"

using namespace omicause;

namespace {

VariableMeta meta(const std::string& name) {
    return {name, VariableKind::categorical(2), family_from_name(name, "vital_status")};
}

}  // namespace

TEST_CASE("claim sentences per family") {
    CHECK(claim_text(meta("mu_UBR4")) == "Mutation in gene UBR4 is related to the survival in cancer");
    CHECK(claim_text(meta("cn_COL14A1")) == "Copy number variations in gene COL14A1 is related to the survival in cancer");
    CHECK(claim_text(meta("pp_AKT1")) == "Changes in protein levels in gene AKT1 is related to the survival in cancer");
    CHECK(claim_text(meta("rs_TP53")) == "Change in gene expression in gene TP53 is related to the survival in cancer");
    CHECK(claim_text(meta("age")) == "age is related to the survival in cancer");
}

TEST_CASE("negation inserts a single token") {
    const std::string text = claim_text(meta("mu_UBR4"));
    CHECK(negate_claim(text) == "Mutation in gene UBR4 is not related to the survival in cancer");
    CHECK_THROWS_AS(negate_claim("no verb here"), InvalidArgument);
}

TEST_CASE("generation prompts") {
    CHECK(claim_prompt(meta("cn_IDO1")) == "Copy number variation in gene IDO1 affects vital status");
    CHECK(claim_prompt(meta("mu_TNXB")) == "Mutation in gene TNXB affects vital status");
}

TEST_CASE("claims follow the target's adjacencies whatever the marks") {
    MixedGraph g({"mu_UBR4", "vital_status", "cn_COL14A1", "rs_TP53"});
    g.add_directed(0, 1);
    g.set_edge(1, 2, Mark::Circle, Mark::Arrow);
    const std::vector<VariableMeta> metas{meta("mu_UBR4"), meta("vital_status"), meta("cn_COL14A1"), meta("rs_TP53")};
    const ClaimProvenance prov{"pc", "chi-square", 0.05, "graph.json"};
    const auto claims = edges_to_claims(g, "vital_status", metas, prov);
    REQUIRE(claims.size() == 2);
    CHECK(claims[0].subject.name == "mu_UBR4");
    CHECK(claims[1].subject.name == "cn_COL14A1");
    CHECK(claims[0].id == "a3724005527f5ffb");
    CHECK(claims[0].provenance.algorithm == "pc");

    const auto j = claims_to_json(claims);
    CHECK(j["claims"][0]["family"] == "mutation");
    CHECK(j["claims"][0]["relation"] == "related_to_survival");
    CHECK(j["claims"][1]["negation_text"] ==
          "Copy number variations in gene COL14A1 is not related to the survival in cancer");
    CHECK(j["claims"][0]["provenance"]["graph_file"] == "graph.json");

    MixedGraph isolated({"mu_UBR4", "vital_status"});
    CHECK(edges_to_claims(isolated, "vital_status", metas, prov).empty());
    CHECK_THROWS_AS(edges_to_claims(g, "missing", metas, prov), InvalidArgument);
    CHECK_THROWS_AS(edges_to_claims(g, "vital_status", {meta("vital_status")}, prov), InvalidArgument);
}
