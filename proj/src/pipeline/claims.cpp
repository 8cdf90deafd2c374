#include "pipeline/claims.hpp"

#include <algorithm>
#include <cstdio>

#include "util/error.hpp"
#include "util/hash.hpp"

namespace omicause {

std::string_view relation_name(Relation r) {
    return r == Relation::RelatedToSurvival ? "related_to_survival" : "affects_vital_status";
}

std::string claim_text(const VariableMeta& meta) {
    const std::string gene = gene_symbol(meta.name);
    const std::string tail = " is related to the survival in cancer";
    switch (meta.family) {
        case Family::Mutation: return "Mutation in gene " + gene + tail;
        case Family::CopyNumber: return "Copy number variations in gene " + gene + tail;
        case Family::ProteinLevel: return "Changes in protein levels in gene " + gene + tail;
        case Family::GeneExpression: return "Change in gene expression in gene " + gene + tail;
        case Family::Target:
        case Family::Other: break;
    }
    return meta.name + tail;
}

std::string negate_claim(const std::string& text) {
    const auto pos = text.find("related");
    if (pos == std::string::npos) throw InvalidArgument("claim text has no 'related': " + text);
    return text.substr(0, pos) + "not " + text.substr(pos);
}

std::string claim_prompt(const VariableMeta& meta) {
    const std::string gene = gene_symbol(meta.name);
    const std::string tail = " affects vital status";
    switch (meta.family) {
        case Family::Mutation: return "Mutation in gene " + gene + tail;
        case Family::CopyNumber: return "Copy number variation in gene " + gene + tail;
        case Family::ProteinLevel: return "Change in protein level in gene " + gene + tail;
        case Family::GeneExpression: return "Change in gene expression in gene " + gene + tail;
        case Family::Target:
        case Family::Other: break;
    }
    return meta.name + tail;
}

std::vector<Claim> edges_to_claims(const MixedGraph& graph, const std::string& target,
                                   const std::vector<VariableMeta>& metas, const ClaimProvenance& provenance) {
    const auto t = graph.find(target);
    if (!t) throw InvalidArgument("target '" + target + "' is not a graph node");
    std::vector<Claim> out;
    for (int v : graph.adjacents(*t)) {
        const std::string& name = graph.name(v);
        auto it = std::find_if(metas.begin(), metas.end(), [&](const VariableMeta& m) { return m.name == name; });
        if (it == metas.end()) throw InvalidArgument("no variable metadata for '" + name + "'");
        Claim c;
        c.subject = *it;
        c.text = claim_text(*it);
        c.negation_text = negate_claim(c.text);
        c.prompt = claim_prompt(*it);
        c.provenance = provenance;
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(c.text)));
        c.id = buf;
        out.push_back(std::move(c));
    }
    return out;
}

nlohmann::ordered_json claims_to_json(const std::vector<Claim>& claims) {
    auto list = nlohmann::ordered_json::array();
    for (const auto& c : claims) {
        nlohmann::ordered_json j;
        j["id"] = c.id;
        j["subject"] = c.subject.name;
        j["family"] = family_name(c.subject.family);
        j["relation"] = relation_name(c.relation);
        j["text"] = c.text;
        j["negation_text"] = c.negation_text;
        j["prompt"] = c.prompt;
        j["provenance"] = {{"algorithm", c.provenance.algorithm},
                           {"test_or_score", c.provenance.test_or_score},
                           {"alpha", c.provenance.alpha},
                           {"graph_file", c.provenance.graph_file}};
        list.push_back(std::move(j));
    }
    nlohmann::ordered_json out;
    out["claims"] = std::move(list);
    return out;
}

}  // namespace omicause
