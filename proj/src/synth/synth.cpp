#include "synth/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <random>

#include "graph/orientation.hpp"
#include "util/error.hpp"
#include "util/hash.hpp"

namespace omicause {

namespace {

// Signed magnitude in [0.5, 1.5].
double signed_weight(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> mag(0.5, 1.5);
    std::bernoulli_distribution sign(0.5);
    const double m = mag(rng);
    return sign(rng) ? m : -m;
}

std::vector<int> topo(const MixedGraph& dag) {
    require_dag(dag);
    return *dag.topological_order();
}

std::vector<std::string> level_labels(int card) {
    std::vector<std::string> out;
    for (int i = 0; i < card; ++i) out.push_back("s" + std::to_string(i));
    return out;
}

// Mixed-radix index of the parents' current codes.
std::size_t config_index(const std::vector<int>& parents, const std::vector<int>& cards,
                         const std::vector<std::vector<std::int32_t>>& codes, std::size_t row) {
    std::size_t idx = 0;
    for (int p : parents)
        idx = idx * static_cast<std::size_t>(cards[static_cast<std::size_t>(p)]) +
              static_cast<std::size_t>(codes[static_cast<std::size_t>(p)][row]);
    return idx;
}

std::string fmt(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::vector<std::string> sim_node_names(int n) {
    std::vector<std::string> out;
    for (int i = 1; i <= n; ++i) out.push_back("X" + std::to_string(i));
    return out;
}

MixedGraph random_dag(const SimSpec& spec) {
    if (spec.n_nodes < 1) throw InvalidArgument("random_dag needs at least one node");
    if (spec.edge_density.has_value() == spec.expected_degree.has_value())
        throw InvalidArgument("give exactly one of edge_density and expected_degree");
    double p = 0.0;
    if (spec.edge_density) {
        p = *spec.edge_density;
        if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("edge_density must lie in [0, 1]");
    } else {
        const double d = *spec.expected_degree;
        if (!(d >= 0.0)) throw InvalidArgument("expected_degree must be non-negative");
        p = spec.n_nodes > 1 ? d / (spec.n_nodes - 1) : 0.0;
        if (p > 1.0) throw InvalidArgument("expected_degree exceeds n_nodes - 1");
    }

    std::mt19937_64 rng(combine_seed(spec.seed, 0x646167ULL));
    std::vector<int> order(static_cast<std::size_t>(spec.n_nodes));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    MixedGraph g(sim_node_names(spec.n_nodes));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = i + 1; j < order.size(); ++j)
            if (u(rng) < p) g.add_directed(order[i], order[j]);
    return g;
}

DataTable simulate_discrete(const MixedGraph& dag, const std::vector<int>& cardinalities, std::size_t n_rows,
                            std::uint64_t seed) {
    const std::vector<int> order = topo(dag);
    const auto n = static_cast<std::size_t>(dag.size());
    std::vector<int> cards = cardinalities.empty() ? std::vector<int>(n, 2) : cardinalities;
    if (cards.size() != n) throw InvalidArgument("one cardinality per node required");
    for (int c : cards)
        if (c < 2) throw InvalidArgument("cardinalities must be at least 2");

    std::mt19937_64 rng(combine_seed(seed, 0x64697363ULL));
    std::gamma_distribution<double> gamma(0.5, 1.0);
    std::vector<std::vector<int>> parents(n);
    std::vector<std::vector<double>> cpt(n);  // config-major, then level
    for (std::size_t v = 0; v < n; ++v) {
        parents[v] = dag.parents(static_cast<int>(v));
        std::size_t configs = 1;
        for (int p : parents[v]) configs *= static_cast<std::size_t>(cards[static_cast<std::size_t>(p)]);
        const auto card = static_cast<std::size_t>(cards[v]);
        cpt[v].resize(configs * card);
        for (std::size_t c = 0; c < configs; ++c) {
            double* row = &cpt[v][c * card];
            double sum = 0.0;
            while (!(sum > 0.0)) {
                sum = 0.0;
                for (std::size_t k = 0; k < card; ++k) sum += row[k] = gamma(rng);
            }
            for (std::size_t k = 0; k < card; ++k) row[k] /= sum;
        }
    }

    std::vector<std::vector<std::int32_t>> codes(n, std::vector<std::int32_t>(n_rows));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t r = 0; r < n_rows; ++r)
        for (int vi : order) {
            const auto v = static_cast<std::size_t>(vi);
            const auto card = static_cast<std::size_t>(cards[v]);
            const double* probs = &cpt[v][config_index(parents[v], cards, codes, r) * card];
            const double draw = u(rng);
            double acc = 0.0;
            std::size_t k = 0;
            for (; k + 1 < card; ++k) {
                acc += probs[k];
                if (draw < acc) break;
            }
            codes[v][r] = static_cast<std::int32_t>(k);
        }

    std::vector<Column> cols;
    for (std::size_t v = 0; v < n; ++v) {
        Column c;
        c.meta.name = dag.name(static_cast<int>(v));
        c.meta.kind = VariableKind::categorical(cards[v]);
        c.meta.family = family_from_name(c.meta.name, "");
        c.codes = std::move(codes[v]);
        c.levels = level_labels(cards[v]);
        cols.push_back(std::move(c));
    }
    return DataTable(std::move(cols));
}

DataTable simulate_cg(const MixedGraph& dag, const std::vector<VariableKind>& kinds, std::size_t n_rows,
                      std::uint64_t seed) {
    const std::vector<int> order = topo(dag);
    const auto n = static_cast<std::size_t>(dag.size());
    std::vector<VariableKind> ks = kinds.empty() ? std::vector<VariableKind>(n, VariableKind::continuous()) : kinds;
    if (ks.size() != n) throw InvalidArgument("one kind per node required");
    for (const auto& k : ks)
        if (k.is_categorical() && k.cardinality() < 2) throw InvalidArgument("cardinalities must be at least 2");
    if (n_rows < 2) throw InvalidArgument("simulate_cg needs at least two rows");

    std::vector<int> cards(n, 0);
    for (std::size_t v = 0; v < n; ++v) cards[v] = ks[v].cardinality();

    std::mt19937_64 rng(combine_seed(seed, 0x6367ULL));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::vector<std::int32_t>> codes(n);
    std::vector<std::vector<double>> values(n);

    for (int vi : order) {
        const auto v = static_cast<std::size_t>(vi);
        std::vector<int> disc, cont;
        for (int p : dag.parents(vi)) (ks[static_cast<std::size_t>(p)].is_categorical() ? disc : cont).push_back(p);
        std::size_t configs = 1;
        for (int p : disc) configs *= static_cast<std::size_t>(cards[static_cast<std::size_t>(p)]);

        if (ks[v].is_continuous()) {
            std::vector<double> w(cont.size()), intercept(configs);
            for (double& x : w) x = signed_weight(rng);
            for (double& x : intercept) x = normal(rng);
            auto& col = values[v];
            col.resize(n_rows);
            for (std::size_t r = 0; r < n_rows; ++r) {
                double y = intercept[config_index(disc, cards, codes, r)] + normal(rng);
                for (std::size_t j = 0; j < cont.size(); ++j) y += w[j] * values[static_cast<std::size_t>(cont[j])][r];
                col[r] = y;
            }
            double mean = std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(n_rows);
            double ss = 0.0;
            for (double x : col) ss += (x - mean) * (x - mean);
            const double sd = std::sqrt(ss / static_cast<double>(n_rows - 1));
            for (double& x : col) x = (x - mean) / sd;
        } else {
            const auto card = static_cast<std::size_t>(cards[v]);
            std::vector<double> bias(configs * card), w(cont.size() * card);
            for (double& x : bias) x = normal(rng);
            for (double& x : w) x = signed_weight(rng);
            auto& col = codes[v];
            col.resize(n_rows);
            std::vector<double> score(card);
            for (std::size_t r = 0; r < n_rows; ++r) {
                const std::size_t cfg = config_index(disc, cards, codes, r);
                double top = -std::numeric_limits<double>::infinity();
                for (std::size_t k = 0; k < card; ++k) {
                    double s = bias[cfg * card + k];
                    for (std::size_t j = 0; j < cont.size(); ++j)
                        s += w[j * card + k] * values[static_cast<std::size_t>(cont[j])][r];
                    score[k] = s;
                    top = std::max(top, s);
                }
                double sum = 0.0;
                for (double& s : score) sum += s = std::exp(s - top);
                const double draw = u(rng) * sum;
                double acc = 0.0;
                std::size_t k = 0;
                for (; k + 1 < card; ++k) {
                    acc += score[k];
                    if (draw < acc) break;
                }
                col[r] = static_cast<std::int32_t>(k);
            }
        }
    }

    std::vector<Column> cols;
    for (std::size_t v = 0; v < n; ++v) {
        Column c;
        c.meta.name = dag.name(static_cast<int>(v));
        c.meta.kind = ks[v];
        c.meta.family = family_from_name(c.meta.name, "");
        if (ks[v].is_categorical()) {
            c.codes = std::move(codes[v]);
            c.levels = level_labels(cards[v]);
        } else {
            c.values = std::move(values[v]);
        }
        cols.push_back(std::move(c));
    }
    return DataTable(std::move(cols));
}

DataTable hide_nodes(const DataTable& table, const std::vector<std::string>& hidden) {
    for (const auto& h : hidden) table.index_of(h);
    std::vector<std::string> keep;
    for (const auto& name : table.names())
        if (std::find(hidden.begin(), hidden.end(), name) == hidden.end()) keep.push_back(name);
    return table.select(keep);
}

MetricsReport evaluate(const MixedGraph& estimated, const MixedGraph& truth) {
    require_dag(truth);
    MetricsReport m;
    m.comparison = compare_graphs(estimated, dag_to_cpdag(truth));
    m.true_edges = truth.num_edges();
    return m;
}

nlohmann::ordered_json metrics_to_json(const MetricsReport& m) {
    const auto& c = m.comparison;
    nlohmann::ordered_json j;
    j["shd"] = c.shd;
    j["true_edges"] = m.true_edges;
    j["estimated_adjacencies"] = c.estimated_adjacencies;
    j["true_adjacencies"] = c.true_adjacencies;
    j["shared_adjacencies"] = c.shared_adjacencies;
    j["shared_same_marks"] = c.shared_same_marks;
    j["adjacency_precision"] = c.adjacency_precision;
    j["adjacency_recall"] = c.adjacency_recall;
    j["adjacency_f1"] = c.adjacency_f1;
    j["orientation_accuracy"] = c.orientation_accuracy;
    j["precision_undefined"] = c.precision_undefined;
    j["recall_undefined"] = c.recall_undefined;
    j["orientation_undefined"] = c.orientation_undefined;
    return j;
}

std::string metrics_csv_header() {
    return "label,shd,true_edges,estimated_adjacencies,true_adjacencies,shared_adjacencies,adjacency_precision,"
           "adjacency_recall,adjacency_f1,orientation_accuracy,precision_undefined,recall_undefined,"
           "orientation_undefined";
}

std::string metrics_csv_row(const std::string& label, const MetricsReport& m) {
    const auto& c = m.comparison;
    std::string out = label;
    for (const std::string& f :
         {std::to_string(c.shd), std::to_string(m.true_edges), std::to_string(c.estimated_adjacencies),
          std::to_string(c.true_adjacencies), std::to_string(c.shared_adjacencies), fmt(c.adjacency_precision),
          fmt(c.adjacency_recall), fmt(c.adjacency_f1), fmt(c.orientation_accuracy),
          std::string(c.precision_undefined ? "1" : "0"), std::string(c.recall_undefined ? "1" : "0"),
          std::string(c.orientation_undefined ? "1" : "0")})
        out += "," + f;
    return out;
}

}  // namespace omicause
