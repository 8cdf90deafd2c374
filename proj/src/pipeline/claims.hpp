#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "graph/mixed_graph.hpp"
#include "tabular/data_table.hpp"

namespace omicause {

enum class Relation { RelatedToSurvival, AffectsVitalStatus };

std::string_view relation_name(Relation r);

struct ClaimProvenance {
    std::string algorithm;
    std::string test_or_score;
    double alpha = 0.0;  // 0 for score-based runs
    std::string graph_file;
};

struct Claim {
    std::string id;  // content hash of text
    VariableMeta subject;
    Relation relation = Relation::RelatedToSurvival;
    std::string text;
    std::string negation_text;
    std::string prompt;  // generation prompt ("... affects vital status")
    ClaimProvenance provenance;
};

// Verification sentence for a variable, e.g. "Mutation in gene UBR4 is related
// to the survival in cancer".
std::string claim_text(const VariableMeta& meta);

// The same sentence with "not " inserted before "related".
std::string negate_claim(const std::string& text);

// Generation prompt, e.g. "Copy number variation in gene IDO1 affects vital status".
std::string claim_prompt(const VariableMeta& meta);

// One claim per node adjacent to the target, in node order, whatever the edge
// marks. Throws InvalidArgument when the target is not a graph node.
std::vector<Claim> edges_to_claims(const MixedGraph& graph, const std::string& target,
                                   const std::vector<VariableMeta>& metas, const ClaimProvenance& provenance);

// {"claims": [{id, subject, family, relation, text, negation_text, prompt, provenance}]}
nlohmann::ordered_json claims_to_json(const std::vector<Claim>& claims);

}  // namespace omicause
