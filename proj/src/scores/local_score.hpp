#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "graph/mixed_graph.hpp"
#include "tabular/data_table.hpp"

namespace omicause {

// Decomposable local score; higher is better.
struct LocalScore {
    double value = 0.0;
    int node = 0;
    std::vector<int> parents;
    double params_used = 0.0;
};

LocalScore discrete_bic(const DataTable& table, int node, std::span<const int> parents, double penalty_discount = 1.0);
LocalScore bdeu(const DataTable& table, int node, std::span<const int> parents, double ess = 1.0);
LocalScore cg_bic(const DataTable& table, int node, std::span<const int> parents, double penalty_discount = 1.0);

class ScoreFunction {
public:
    virtual ~ScoreFunction() = default;
    virtual std::string_view name() const = 0;
    virtual const std::vector<std::string>& variables() const = 0;
    virtual LocalScore local(int node, std::span<const int> parents) const = 0;
    int num_variables() const { return static_cast<int>(variables().size()); }
};

class DiscreteBicScore final : public ScoreFunction {
public:
    explicit DiscreteBicScore(const DataTable& table, double penalty_discount = 1.0);
    std::string_view name() const override { return "discrete-bic"; }
    const std::vector<std::string>& variables() const override { return names_; }
    LocalScore local(int node, std::span<const int> parents) const override;

private:
    const DataTable& table_;
    std::vector<std::string> names_;
    double discount_;
};

class BdeuScore final : public ScoreFunction {
public:
    explicit BdeuScore(const DataTable& table, double ess = 1.0);
    std::string_view name() const override { return "bdeu"; }
    const std::vector<std::string>& variables() const override { return names_; }
    LocalScore local(int node, std::span<const int> parents) const override;

private:
    const DataTable& table_;
    std::vector<std::string> names_;
    double ess_;
};

class CgBicScore final : public ScoreFunction {
public:
    explicit CgBicScore(const DataTable& table, double penalty_discount = 1.0);
    std::string_view name() const override { return "cg-bic"; }
    const std::vector<std::string>& variables() const override { return names_; }
    LocalScore local(int node, std::span<const int> parents) const override;

private:
    const DataTable& table_;
    std::vector<std::string> names_;
    double discount_;
};

// Memo over (node, sorted parents). Safe for concurrent lookups and inserts.
class CachedScore final : public ScoreFunction {
public:
    explicit CachedScore(const ScoreFunction& inner) : inner_(inner) {}
    std::string_view name() const override { return inner_.name(); }
    const std::vector<std::string>& variables() const override { return inner_.variables(); }
    LocalScore local(int node, std::span<const int> parents) const override;
    std::size_t entries() const;

private:
    const ScoreFunction& inner_;
    mutable std::shared_mutex mutex_;
    mutable std::map<std::vector<int>, LocalScore> cache_;  // key: node, then sorted parents
};

// Sum of local scores of a DAG.
double dag_score(const ScoreFunction& score, const MixedGraph& dag);

struct ScoreOptions {
    double penalty_discount = 1.0;
    double ess = 1.0;
};

// Identifiers: discrete-bic, bdeu, cg-bic.
std::unique_ptr<ScoreFunction> make_score(std::string_view id, const DataTable& table, const ScoreOptions& opts = {});

}  // namespace omicause
