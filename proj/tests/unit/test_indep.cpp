#include <doctest.h>

#include <cmath>
#include <numeric>

#include "fixtures.hpp"
#include "indep/ci_test.hpp"
#include "util/error.hpp"

using namespace omicause;

namespace {

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size()); }

double corr(std::span<const double> a, std::span<const double> b) {
    const double n = double(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) ma += a[i] / n, mb += b[i] / n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

}  // namespace

TEST_CASE("chi-square matches the reference values") {
    const DataTable t = small_xyz();
    const int none[] = {0};
    const CITestResult m = chi_square_test(t, 0, 1, std::span<const int>(none, 0), 0.05);
    CHECK(m.statistic == doctest::Approx(3.133333333333333).epsilon(1e-12));
    CHECK(m.dof == 2);
    CHECK(m.p_value == doctest::Approx(0.2087398233900797).epsilon(1e-9));
    CHECK(m.independent);

    const int z[] = {2};
    const CITestResult c = chi_square_test(t, 1, 0, z, 0.05);
    CHECK(c.statistic == doctest::Approx(4.333333333333333).epsilon(1e-12));
    CHECK(c.dof == 4);
    CHECK(c.p_value == doctest::Approx(0.3627696726435112).epsilon(1e-9));
}

TEST_CASE("chi-square rejects continuous columns and degenerate strata give p = 1") {
    const DataTable g = gaussian_xyz(50, 0.5, 1);
    CHECK_THROWS_AS(chi_square_test(g, 0, 1, {}, 0.05), InvalidArgument);
    const DataTable t = parse_csv("a,b\nx,y\nx,z\n", "").table;
    const CITestResult r = chi_square_test(t, 0, 1, {}, 0.05);
    CHECK(r.degenerate);
    CHECK(r.p_value == 1.0);
}

TEST_CASE("cg-lrt on continuous data is the partial-correlation LRT") {
    const DataTable t = gaussian_xyz(400, 0.15, 7);
    const double rxy = corr(t.values(0), t.values(1));
    const double rxz = corr(t.values(0), t.values(2));
    const double ryz = corr(t.values(1), t.values(2));
    const double partial = (rxy - rxz * ryz) / std::sqrt((1 - rxz * rxz) * (1 - ryz * ryz));
    const int z[] = {2};
    const CITestResult r = cg_lrt(t, 0, 1, z, 0.05);
    CHECK(r.dof == 1);
    CHECK(r.statistic == doctest::Approx(-400.0 * std::log(1 - partial * partial)).epsilon(1e-6));
    const CITestResult m = cg_lrt(t, 0, 1, {}, 0.05);
    CHECK(m.statistic == doctest::Approx(-400.0 * std::log(1 - rxy * rxy)).epsilon(1e-6));
}

TEST_CASE("cg-lrt on a continuous-categorical pair is the heteroscedastic ANOVA LRT") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 1.0);
    const std::size_t n = 300;
    std::vector<double> x(n);
    std::vector<std::int32_t> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = static_cast<std::int32_t>(i % 3);
        x[i] = 0.2 * y[i] + (1.0 + 0.5 * y[i]) * g(rng);
    }
    const DataTable t({oracle::continuous("x", x), oracle::categorical("y", y, 3)});
    auto mle_var = [](const std::vector<double>& v) {
        const double m = mean(v);
        double s = 0;
        for (double a : v) s += (a - m) * (a - m);
        return s / double(v.size());
    };
    double stat = double(n) * std::log(mle_var(x));
    for (int k = 0; k < 3; ++k) {
        std::vector<double> grp;
        for (std::size_t i = 0; i < n; ++i)
            if (y[i] == k) grp.push_back(x[i]);
        stat -= double(grp.size()) * std::log(mle_var(grp));
    }
    const CITestResult r = cg_lrt(t, 0, 1, {}, 0.05);
    CHECK(r.statistic == doctest::Approx(stat).epsilon(1e-6));
    CHECK(r.dof == 4);  // two extra means and two extra variances
}

TEST_CASE("cg-lrt needs enough rows") {
    const DataTable t = gaussian_xyz(5, 0.5, 1);
    const int z[] = {2};
    CHECK_THROWS_AS(cg_lrt(t, 0, 1, z, 0.05), DataError);
}

TEST_CASE("rcit separates dependence from conditional independence") {
    RcitParams p;
    p.seed = 5;
    const DataTable dep = gaussian_xyz(800, 0.6, 11);
    CHECK_FALSE(rcit(dep, 0, 1, {}, 0.05, p).independent);
    const int z[] = {2};
    CHECK_FALSE(rcit(dep, 0, 1, z, 0.05, p).independent);
    const DataTable ci = gaussian_xyz(800, 0.0, 12);
    CHECK(rcit(ci, 0, 1, z, 0.05, p).p_value > 0.01);
}

TEST_CASE("rcit is a function of the seed") {
    const DataTable t = gaussian_xyz(300, 0.1, 2);
    RcitParams p;
    p.seed = 9;
    const int z[] = {2};
    const CITestResult a = rcit(t, 0, 1, z, 0.05, p);
    const CITestResult b = rcit(t, 1, 0, z, 0.05, p);
    CHECK(a.statistic == b.statistic);
    CHECK(a.p_value == b.p_value);
    p.seed = 10;
    CHECK(rcit(t, 0, 1, z, 0.05, p).statistic != a.statistic);
}

TEST_CASE("oracle test and cache") {
    MixedGraph dag({"A", "B", "C"});
    dag.add_directed(0, 1);
    dag.add_directed(1, 2);
    DsepOracleTest oracle_test(dag);
    const int b[] = {1};
    CHECK(oracle_test.test(0, 2, b).independent);
    CHECK_FALSE(oracle_test.test(0, 2, {}).independent);

    CachedTest cached(oracle_test);
    cached.test(0, 2, b);
    cached.test(2, 0, b);
    cached.test(0, 2, {});
    const CacheStats s = cached.stats();
    CHECK(s.entries == 2);
    CHECK(s.hits == 1);
    CHECK(s.misses == 2);
    CHECK(TestCacheKey::make(2, 0, std::vector<int>{3, 1}) == TestCacheKey::make(0, 2, std::vector<int>{1, 3}));
}

TEST_CASE("queries are validated") {
    const DataTable t = small_xyz();
    ChiSquareTest test(t);
    const int bad[] = {0};
    CHECK_THROWS_AS(test.test(0, 0, {}), InvalidArgument);
    CHECK_THROWS_AS(test.test(0, 1, bad), InvalidArgument);
    CHECK_THROWS_AS(test.test(0, 5, {}), InvalidArgument);
    CHECK_THROWS_AS(make_test("g-square", t, 0.05), InvalidArgument);
    CHECK(make_test("cg-lrt", t, 0.05)->name() == "cg-lrt");
}
