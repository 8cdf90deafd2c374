#include "indep/ci_test.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "graph/orientation.hpp"
#include "indep/cg_model.hpp"
#include "util/error.hpp"
#include "util/stats.hpp"

namespace omicause {

CITestResult make_result(double statistic, double dof, double p_value, double alpha, bool degenerate) {
    CITestResult r;
    r.statistic = statistic;
    r.dof = dof;
    r.p_value = std::clamp(std::isfinite(p_value) ? p_value : 1.0, 0.0, 1.0);
    r.alpha = alpha;
    r.independent = r.p_value > alpha;
    r.degenerate = degenerate;
    return r;
}

IndependenceTest::IndependenceTest(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
}

void IndependenceTest::check_query(int x, int y, std::span<const int> z) const {
    const int n = num_variables();
    auto bad = [n](int v) { return v < 0 || v >= n; };
    if (bad(x) || bad(y) || std::any_of(z.begin(), z.end(), bad)) throw InvalidArgument("test variable out of range");
    if (x == y) throw InvalidArgument("test needs two distinct variables");
    if (std::find(z.begin(), z.end(), x) != z.end() || std::find(z.begin(), z.end(), y) != z.end())
        throw InvalidArgument("conditioning set contains a tested variable");
}

TestCacheKey TestCacheKey::make(int x, int y, std::span<const int> z) {
    TestCacheKey k{std::min(x, y), std::max(x, y), std::vector<int>(z.begin(), z.end())};
    std::sort(k.z.begin(), k.z.end());
    return k;
}

CachedTest::CachedTest(const IndependenceTest& inner) : IndependenceTest(inner.alpha()), inner_(inner) {}

CITestResult CachedTest::test(int x, int y, std::span<const int> z) const {
    auto key = TestCacheKey::make(x, y, z);
    {
        std::shared_lock lock(mutex_);
        if (auto it = cache_.find(key); it != cache_.end()) {
            ++hits_;
            return it->second;
        }
    }
    ++misses_;
    CITestResult r = inner_.test(key.x, key.y, key.z);
    std::unique_lock lock(mutex_);
    return cache_.emplace(std::move(key), r).first->second;
}

CacheStats CachedTest::stats() const {
    std::shared_lock lock(mutex_);
    return {hits_.load(), misses_.load(), cache_.size()};
}

namespace {

struct Canonical {
    int x, y;
    std::vector<int> z;
};

Canonical canonical(int x, int y, std::span<const int> z) {
    Canonical c{std::min(x, y), std::max(x, y), std::vector<int>(z.begin(), z.end())};
    std::sort(c.z.begin(), c.z.end());
    return c;
}

void check_table_query(const DataTable& table, int x, int y, std::span<const int> z) {
    const auto n = static_cast<int>(table.n_cols());
    auto bad = [n](int v) { return v < 0 || v >= n; };
    if (bad(x) || bad(y) || std::any_of(z.begin(), z.end(), bad)) throw InvalidArgument("test variable out of range");
    if (x == y) throw InvalidArgument("test needs two distinct variables");
    if (std::find(z.begin(), z.end(), x) != z.end() || std::find(z.begin(), z.end(), y) != z.end())
        throw InvalidArgument("conditioning set contains a tested variable");
}

}  // namespace

CITestResult chi_square_test(const DataTable& table, int x, int y, std::span<const int> z, double alpha) {
    check_table_query(table, x, y, z);
    const Canonical q = canonical(x, y, z);
    auto require_cat = [&](int v) {
        if (!table.is_categorical(static_cast<std::size_t>(v)))
            throw InvalidArgument("chi-square test needs categorical variables; '" +
                                  table.meta(static_cast<std::size_t>(v)).name + "' is continuous");
    };
    require_cat(q.x);
    require_cat(q.y);
    for (int v : q.z) require_cat(v);

    const RowGroups strata = group_rows(table, q.z);
    const auto r = static_cast<std::size_t>(table.cardinality(static_cast<std::size_t>(q.x)));
    const auto c = static_cast<std::size_t>(table.cardinality(static_cast<std::size_t>(q.y)));
    std::vector<double> counts(strata.count * r * c, 0.0);
    auto xs = table.codes(static_cast<std::size_t>(q.x));
    auto ys = table.codes(static_cast<std::size_t>(q.y));
    for (std::size_t i = 0; i < table.n_rows(); ++i)
        counts[(strata.group[i] * r + static_cast<std::size_t>(xs[i])) * c + static_cast<std::size_t>(ys[i])] += 1.0;

    double stat = 0.0;
    double dof = 0.0;
    std::vector<double> rows(r), cols(c);
    for (std::size_t s = 0; s < strata.count; ++s) {
        const double* t = &counts[s * r * c];
        std::fill(rows.begin(), rows.end(), 0.0);
        std::fill(cols.begin(), cols.end(), 0.0);
        double total = 0.0;
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) {
                rows[i] += t[i * c + j];
                cols[j] += t[i * c + j];
                total += t[i * c + j];
            }
        const auto nz_rows = std::count_if(rows.begin(), rows.end(), [](double v) { return v > 0; });
        const auto nz_cols = std::count_if(cols.begin(), cols.end(), [](double v) { return v > 0; });
        if (nz_rows < 2 || nz_cols < 2) continue;
        dof += static_cast<double>((nz_rows - 1) * (nz_cols - 1));
        for (std::size_t i = 0; i < r; ++i) {
            if (rows[i] == 0) continue;
            for (std::size_t j = 0; j < c; ++j) {
                if (cols[j] == 0) continue;
                const double e = rows[i] * cols[j] / total;
                const double d = t[i * c + j] - e;
                stat += d * d / e;
            }
        }
    }
    if (dof == 0.0) return make_result(0.0, 0.0, 1.0, alpha, true);
    return make_result(stat, dof, stats::chi2_sf(stat, dof), alpha);
}

CITestResult cg_lrt(const DataTable& table, int x, int y, std::span<const int> z, double alpha) {
    check_table_query(table, x, y, z);
    const Canonical q = canonical(x, y, z);
    auto with = [&](std::initializer_list<int> extra) {
        std::vector<int> v = q.z;
        v.insert(v.end(), extra);
        std::sort(v.begin(), v.end());
        return v;
    };
    const auto full_vars = with({q.x, q.y});
    const CgFit full = cg_loglik(table, full_vars);
    if (static_cast<double>(table.n_rows()) < full.params + 5.0)
        throw DataError("cg-lrt needs at least " + std::to_string(static_cast<long>(full.params) + 5) + " rows, have " +
                        std::to_string(table.n_rows()));
    const CgFit xz = cg_loglik(table, with({q.x}));
    const CgFit yz = cg_loglik(table, with({q.y}));
    const CgFit zz = cg_loglik(table, q.z);

    const double stat = std::max(0.0, 2.0 * (full.loglik - xz.loglik - yz.loglik + zz.loglik));
    const double dof = full.params - xz.params - yz.params + zz.params;
    if (dof <= 0.0) return make_result(stat, 0.0, 1.0, alpha, true);
    return make_result(stat, dof, stats::chi2_sf(stat, dof), alpha);
}

namespace {

std::vector<std::string> table_names(const DataTable& t) { return t.names(); }

}  // namespace

ChiSquareTest::ChiSquareTest(const DataTable& table, double alpha)
    : IndependenceTest(alpha), table_(table), names_(table_names(table)) {}

CITestResult ChiSquareTest::test(int x, int y, std::span<const int> z) const {
    return chi_square_test(table_, x, y, z, alpha());
}

CgLrtTest::CgLrtTest(const DataTable& table, double alpha)
    : IndependenceTest(alpha), table_(table), names_(table_names(table)) {}

CITestResult CgLrtTest::test(int x, int y, std::span<const int> z) const { return cg_lrt(table_, x, y, z, alpha()); }

RcitTest::RcitTest(const DataTable& table, double alpha, RcitParams params)
    : IndependenceTest(alpha), table_(table), names_(table_names(table)), params_(params) {}

CITestResult RcitTest::test(int x, int y, std::span<const int> z) const {
    return rcit(table_, x, y, z, alpha(), params_);
}

DsepOracleTest::DsepOracleTest(MixedGraph dag, std::vector<std::string> observed, double alpha)
    : IndependenceTest(alpha), dag_(std::move(dag)), names_(std::move(observed)) {
    require_dag(dag_);
    if (names_.empty()) names_ = dag_.nodes();
    for (const auto& n : names_) to_dag_.push_back(dag_.index_of(n));
}

CITestResult DsepOracleTest::test(int x, int y, std::span<const int> z) const {
    check_query(x, y, z);
    std::vector<int> zz;
    for (int v : z) zz.push_back(to_dag_[static_cast<std::size_t>(v)]);
    const bool sep = d_separated(dag_, to_dag_[static_cast<std::size_t>(x)], to_dag_[static_cast<std::size_t>(y)], zz);
    return make_result(0.0, 0.0, sep ? 1.0 : 0.0, alpha());
}

CITestResult dsep_oracle_test(const MixedGraph& dag, int x, int y, std::span<const int> z, double alpha) {
    const bool sep = d_separated(dag, x, y, std::vector<int>(z.begin(), z.end()));
    return make_result(0.0, 0.0, sep ? 1.0 : 0.0, alpha);
}

std::unique_ptr<IndependenceTest> make_test(std::string_view id, const DataTable& table, double alpha,
                                            const RcitParams& rcit_params) {
    if (id == "chi-square") return std::make_unique<ChiSquareTest>(table, alpha);
    if (id == "cg-lrt") return std::make_unique<CgLrtTest>(table, alpha);
    if (id == "rcit") return std::make_unique<RcitTest>(table, alpha, rcit_params);
    throw InvalidArgument("unknown independence test '" + std::string(id) + "'");
}

}  // namespace omicause
