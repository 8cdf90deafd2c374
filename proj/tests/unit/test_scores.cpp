#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "scores/local_score.hpp"
#include "util/error.hpp"

using namespace omicause;

TEST_CASE("bdeu matches the reference values") {
    const DataTable t = small_xyz();
    const int x[] = {0};
    CHECK(bdeu(t, 1, x, 1.0).value == doctest::Approx(-17.76943972334609).epsilon(1e-12));
    CHECK(bdeu(t, 1, {}, 2.0).value == doctest::Approx(-15.154583537907094).epsilon(1e-12));
}

TEST_CASE("discrete bic matches the reference values") {
    const DataTable t = small_xyz();
    const int x[] = {0};
    const LocalScore s = discrete_bic(t, 1, x, 1.0);
    CHECK(s.value == doctest::Approx(-16.243618258708878).epsilon(1e-12));
    CHECK(s.params_used == 4);
    const int xz[] = {2, 0};
    CHECK(discrete_bic(t, 1, xz, 2.0).value == doctest::Approx(-28.3804694351971).epsilon(1e-12));
}

TEST_CASE("scores are equivalent across a reversed edge") {
    const DataTable t = small_xyz();
    const int x[] = {0}, y[] = {1};
    for (const char* id : {"discrete-bic", "bdeu"}) {
        const auto s = make_score(id, t);
        CHECK(s->local(0, {}).value + s->local(1, x).value == doctest::Approx(s->local(1, {}).value + s->local(0, y).value));
    }
    const DataTable g = gaussian_xyz(200, 0.4, 3);
    const CgBicScore cg(g);
    CHECK(cg.local(0, {}).value + cg.local(1, x).value == doctest::Approx(cg.local(1, {}).value + cg.local(0, y).value));
}

TEST_CASE("cg-bic on continuous data is the Gaussian BIC") {
    const DataTable g = gaussian_xyz(500, 0.4, 8);
    auto v = [&](int c) { return std::vector<double>(g.values(static_cast<std::size_t>(c)).begin(), g.values(static_cast<std::size_t>(c)).end()); };
    const auto x = v(0), y = v(1);
    const double n = 500;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += x[i] / n, my += y[i] / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    const double resid = (syy - sxy * sxy / sxx) / n;
    const double ll = -0.5 * n * (std::log(2 * M_PI * resid) + 1.0);
    const int pa[] = {0};
    // y | x: intercept, slope and variance
    CHECK(cg_bic(g, 1, pa, 1.0).value == doctest::Approx(ll - 1.5 * std::log(n)).epsilon(1e-6));
}

TEST_CASE("cached score and dag score") {
    const DataTable t = small_xyz();
    const BdeuScore inner(t);
    const CachedScore cached(inner);
    const int x[] = {0};
    const double a = cached.local(1, x).value;
    CHECK(cached.local(1, x).value == a);
    CHECK(cached.entries() == 1);
    MixedGraph dag(t.names());
    dag.add_directed(0, 1);
    CHECK(dag_score(inner, dag) == doctest::Approx(inner.local(0, {}).value + a + inner.local(2, {}).value));
}

TEST_CASE("score errors") {
    const DataTable t = small_xyz();
    const int self[] = {1}, dup[] = {0, 0};
    CHECK_THROWS_AS(bdeu(t, 1, self, 1.0), InvalidArgument);
    CHECK_THROWS_AS(bdeu(t, 1, dup, 1.0), InvalidArgument);
    CHECK_THROWS_AS(bdeu(t, 1, {}, 0.0), InvalidArgument);
    CHECK_THROWS_AS(DiscreteBicScore(gaussian_xyz(20, 0.1, 1)), InvalidArgument);
    CHECK_THROWS_AS(make_score("aic", t), InvalidArgument);
}
