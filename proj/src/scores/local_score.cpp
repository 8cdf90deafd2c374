#include "scores/local_score.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "indep/cg_model.hpp"
#include "util/error.hpp"

namespace omicause {

namespace {

std::vector<int> sorted_parents(const DataTable& table, int node, std::span<const int> parents) {
    const auto n = static_cast<int>(table.n_cols());
    if (node < 0 || node >= n) throw InvalidArgument("score node out of range");
    std::vector<int> p(parents.begin(), parents.end());
    std::sort(p.begin(), p.end());
    if (std::adjacent_find(p.begin(), p.end()) != p.end()) throw InvalidArgument("duplicate parent");
    for (int v : p)
        if (v < 0 || v >= n || v == node) throw InvalidArgument("invalid parent index");
    return p;
}

void require_categorical(const DataTable& table, int v, std::string_view score) {
    if (!table.is_categorical(static_cast<std::size_t>(v)))
        throw InvalidArgument(std::string(score) + " needs categorical variables; '" +
                              table.meta(static_cast<std::size_t>(v)).name + "' is continuous");
}

// counts[j * r + k] over observed parent configurations j.
struct Counts {
    std::vector<double> nk;
    std::size_t configs = 0;
    std::size_t r = 0;
};

Counts count_cpt(const DataTable& table, int node, std::span<const int> parents) {
    const RowGroups groups = group_rows(table, parents);
    Counts c;
    c.configs = groups.count;
    c.r = static_cast<std::size_t>(table.cardinality(static_cast<std::size_t>(node)));
    c.nk.assign(c.configs * c.r, 0.0);
    auto codes = table.codes(static_cast<std::size_t>(node));
    for (std::size_t i = 0; i < table.n_rows(); ++i)
        c.nk[groups.group[i] * c.r + static_cast<std::size_t>(codes[i])] += 1.0;
    return c;
}

double parent_configs(const DataTable& table, std::span<const int> parents) {
    double q = 1.0;
    for (int p : parents) q *= table.cardinality(static_cast<std::size_t>(p));
    return q;
}

}  // namespace

LocalScore discrete_bic(const DataTable& table, int node, std::span<const int> parents, double penalty_discount) {
    auto pa = sorted_parents(table, node, parents);
    require_categorical(table, node, "discrete-bic");
    for (int p : pa) require_categorical(table, p, "discrete-bic");
    const Counts c = count_cpt(table, node, pa);
    double ll = 0.0;
    for (std::size_t j = 0; j < c.configs; ++j) {
        double nj = 0.0;
        for (std::size_t k = 0; k < c.r; ++k) nj += c.nk[j * c.r + k];
        for (std::size_t k = 0; k < c.r; ++k) {
            const double v = c.nk[j * c.r + k];
            if (v > 0) ll += v * std::log(v / nj);
        }
    }
    const double k = (static_cast<double>(c.r) - 1.0) * parent_configs(table, pa);
    const double n = static_cast<double>(table.n_rows());
    return {ll - penalty_discount * k / 2.0 * std::log(n), node, std::move(pa), k};
}

LocalScore bdeu(const DataTable& table, int node, std::span<const int> parents, double ess) {
    if (!(ess > 0.0)) throw InvalidArgument("bdeu equivalent sample size must be positive");
    auto pa = sorted_parents(table, node, parents);
    require_categorical(table, node, "bdeu");
    for (int p : pa) require_categorical(table, p, "bdeu");
    const Counts c = count_cpt(table, node, pa);
    const double q = parent_configs(table, pa);
    const double r = static_cast<double>(c.r);
    const double a_j = ess / q;
    const double a_jk = ess / (q * r);
    double value = 0.0;
    for (std::size_t j = 0; j < c.configs; ++j) {
        double nj = 0.0;
        for (std::size_t k = 0; k < c.r; ++k) {
            const double v = c.nk[j * c.r + k];
            nj += v;
            if (v > 0) value += std::lgamma(a_jk + v) - std::lgamma(a_jk);
        }
        value += std::lgamma(a_j) - std::lgamma(a_j + nj);
    }
    return {value, node, std::move(pa), (r - 1.0) * q};
}

LocalScore cg_bic(const DataTable& table, int node, std::span<const int> parents, double penalty_discount) {
    auto pa = sorted_parents(table, node, parents);
    std::vector<int> joint = pa;
    joint.insert(std::lower_bound(joint.begin(), joint.end(), node), node);
    const CgFit with = cg_loglik(table, joint);
    const CgFit without = cg_loglik(table, pa);
    const double k = with.params - without.params;
    const double n = static_cast<double>(table.n_rows());
    const double value = with.loglik - without.loglik - penalty_discount * k / 2.0 * std::log(n);
    if (!std::isfinite(value)) throw DataError("cg-bic produced a non-finite score");
    return {value, node, std::move(pa), k};
}

DiscreteBicScore::DiscreteBicScore(const DataTable& table, double penalty_discount)
    : table_(table), names_(table.names()), discount_(penalty_discount) {
    for (std::size_t j = 0; j < table.n_cols(); ++j) require_categorical(table, static_cast<int>(j), "discrete-bic");
}

LocalScore DiscreteBicScore::local(int node, std::span<const int> parents) const {
    return discrete_bic(table_, node, parents, discount_);
}

BdeuScore::BdeuScore(const DataTable& table, double ess) : table_(table), names_(table.names()), ess_(ess) {
    if (!(ess > 0.0)) throw InvalidArgument("bdeu equivalent sample size must be positive");
    for (std::size_t j = 0; j < table.n_cols(); ++j) require_categorical(table, static_cast<int>(j), "bdeu");
}

LocalScore BdeuScore::local(int node, std::span<const int> parents) const { return bdeu(table_, node, parents, ess_); }

CgBicScore::CgBicScore(const DataTable& table, double penalty_discount)
    : table_(table), names_(table.names()), discount_(penalty_discount) {}

LocalScore CgBicScore::local(int node, std::span<const int> parents) const {
    return cg_bic(table_, node, parents, discount_);
}

LocalScore CachedScore::local(int node, std::span<const int> parents) const {
    std::vector<int> key{node};
    key.insert(key.end(), parents.begin(), parents.end());
    std::sort(key.begin() + 1, key.end());
    {
        std::shared_lock lock(mutex_);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    LocalScore s = inner_.local(node, std::span<const int>(key).subspan(1));
    std::unique_lock lock(mutex_);
    return cache_.emplace(std::move(key), std::move(s)).first->second;
}

std::size_t CachedScore::entries() const {
    std::shared_lock lock(mutex_);
    return cache_.size();
}

double dag_score(const ScoreFunction& score, const MixedGraph& dag) {
    require_dag(dag);
    double total = 0.0;
    for (int v = 0; v < dag.size(); ++v) total += score.local(v, dag.parents(v)).value;
    return total;
}

std::unique_ptr<ScoreFunction> make_score(std::string_view id, const DataTable& table, const ScoreOptions& opts) {
    if (id == "discrete-bic") return std::make_unique<DiscreteBicScore>(table, opts.penalty_discount);
    if (id == "bdeu") return std::make_unique<BdeuScore>(table, opts.ess);
    if (id == "cg-bic") return std::make_unique<CgBicScore>(table, opts.penalty_discount);
    throw InvalidArgument("unknown score '" + std::string(id) + "'");
}

}  // namespace omicause
