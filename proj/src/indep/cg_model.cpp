#include "indep/cg_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "util/error.hpp"

namespace omicause {

RowGroups group_rows(const DataTable& table, std::span<const int> vars) {
    const std::size_t n = table.n_rows();
    RowGroups out;
    out.group.assign(n, 0);
    if (vars.empty()) {
        out.count = n > 0 ? 1 : 0;
        return out;
    }
    // Mixed-radix key when it fits in 63 bits, else vector keys.
    bool fits = true;
    unsigned __int128 product = 1;
    for (int v : vars) {
        product *= static_cast<unsigned>(table.cardinality(static_cast<std::size_t>(v)));
        if (product > (static_cast<unsigned __int128>(1) << 63)) {
            fits = false;
            break;
        }
    }
    if (fits) {
        std::vector<std::uint64_t> keys(n, 0);
        for (int v : vars) {
            const auto card = static_cast<std::uint64_t>(table.cardinality(static_cast<std::size_t>(v)));
            auto codes = table.codes(static_cast<std::size_t>(v));
            for (std::size_t i = 0; i < n; ++i) keys[i] = keys[i] * card + static_cast<std::uint64_t>(codes[i]);
        }
        std::vector<std::uint64_t> uniq = keys;
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        for (std::size_t i = 0; i < n; ++i)
            out.group[i] = static_cast<std::uint32_t>(std::lower_bound(uniq.begin(), uniq.end(), keys[i]) - uniq.begin());
        out.count = uniq.size();
        return out;
    }
    std::map<std::vector<std::int32_t>, std::uint32_t> ids;
    std::vector<std::vector<std::int32_t>> row_keys(n);
    for (std::size_t i = 0; i < n; ++i) {
        row_keys[i].reserve(vars.size());
        for (int v : vars) row_keys[i].push_back(table.codes(static_cast<std::size_t>(v))[i]);
        ids.emplace(row_keys[i], 0);
    }
    std::uint32_t next = 0;
    for (auto& [k, id] : ids) id = next++;
    for (std::size_t i = 0; i < n; ++i) out.group[i] = ids.at(row_keys[i]);
    out.count = ids.size();
    return out;
}

namespace {

constexpr double kRidgeFactor = 1e-8;

std::string names_of(const DataTable& table, std::span<const int> vars) {
    std::string s;
    for (int v : vars) {
        if (!s.empty()) s += ", ";
        s += table.meta(static_cast<std::size_t>(v)).name;
    }
    return s;
}

// Log-likelihood of eval_rows under N(mean, cov + ridge).
double gaussian_loglik(const Eigen::MatrixXd& eval_rows, const Eigen::RowVectorXd& mean, const Eigen::MatrixXd& cov,
                       const DataTable& table, std::span<const int> cont) {
    const auto c = static_cast<double>(cov.rows());
    Eigen::MatrixXd sigma = cov;
    const double ridge = kRidgeFactor * sigma.trace() / c;
    sigma.diagonal().array() += ridge;
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success || !(sigma.trace() > 0.0))
        throw DataError("singular covariance for variables {" + names_of(table, cont) + "}");
    const Eigen::MatrixXd centered = eval_rows.rowwise() - mean;
    const Eigen::MatrixXd solved = llt.solve(centered.transpose());
    const double quad = (centered.transpose().array() * solved.array()).sum();
    const Eigen::MatrixXd& L = llt.matrixL();
    const double logdet = 2.0 * L.diagonal().array().log().sum();
    if (!std::isfinite(logdet)) throw DataError("singular covariance for variables {" + names_of(table, cont) + "}");
    const auto rows = static_cast<double>(eval_rows.rows());
    return -0.5 * (rows * c * std::log(2.0 * std::numbers::pi) + rows * logdet + quad);
}

}  // namespace

CgFit cg_loglik(const DataTable& table, std::span<const int> vars) {
    std::vector<int> disc, cont;
    for (int v : vars) (table.is_categorical(static_cast<std::size_t>(v)) ? disc : cont).push_back(v);
    const std::size_t n = table.n_rows();
    const auto c = static_cast<Eigen::Index>(cont.size());
    CgFit fit;
    if (n == 0) return fit;

    const RowGroups groups = group_rows(table, disc);
    fit.configs = groups.count;
    std::vector<std::vector<std::size_t>> members(groups.count);
    for (std::size_t i = 0; i < n; ++i) members[groups.group[i]].push_back(i);

    if (!disc.empty()) {
        for (const auto& m : members) {
            const auto nd = static_cast<double>(m.size());
            fit.loglik += nd * std::log(nd / static_cast<double>(n));
        }
        fit.params += static_cast<double>(groups.count) - 1.0;
    }
    if (c == 0) return fit;

    Eigen::MatrixXd data(static_cast<Eigen::Index>(n), c);
    for (Eigen::Index j = 0; j < c; ++j) {
        auto col = table.values(static_cast<std::size_t>(cont[static_cast<std::size_t>(j)]));
        for (std::size_t i = 0; i < n; ++i) data(static_cast<Eigen::Index>(i), j) = col[i];
    }
    const double gaussian_params = static_cast<double>(c) + static_cast<double>(c * (c + 1)) / 2.0;
    const std::size_t min_rows = static_cast<std::size_t>(c) + 2;

    std::vector<std::size_t> sparse_rows;
    for (const auto& m : members) {
        if (m.size() < min_rows) {
            ++fit.sparse_configs;
            sparse_rows.insert(sparse_rows.end(), m.begin(), m.end());
            continue;
        }
        Eigen::MatrixXd block(static_cast<Eigen::Index>(m.size()), c);
        for (std::size_t r = 0; r < m.size(); ++r) block.row(static_cast<Eigen::Index>(r)) = data.row(static_cast<Eigen::Index>(m[r]));
        const Eigen::RowVectorXd mu = block.colwise().mean();
        const Eigen::MatrixXd centered = block.rowwise() - mu;
        const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(m.size());
        fit.loglik += gaussian_loglik(block, mu, cov, table, cont);
        fit.params += gaussian_params;
    }
    if (!sparse_rows.empty()) {
        const Eigen::RowVectorXd mu = data.colwise().mean();
        const Eigen::MatrixXd centered = data.rowwise() - mu;
        const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n);
        std::sort(sparse_rows.begin(), sparse_rows.end());
        Eigen::MatrixXd block(static_cast<Eigen::Index>(sparse_rows.size()), c);
        for (std::size_t r = 0; r < sparse_rows.size(); ++r)
            block.row(static_cast<Eigen::Index>(r)) = data.row(static_cast<Eigen::Index>(sparse_rows[r]));
        fit.loglik += gaussian_loglik(block, mu, cov, table, cont);
        fit.params += gaussian_params;
    }
    return fit;
}

}  // namespace omicause
