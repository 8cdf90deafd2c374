#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "indep/ci_test.hpp"
#include "util/error.hpp"
#include "util/hash.hpp"
#include "util/stats.hpp"

namespace omicause {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;

// Numeric design matrix for a variable block: continuous columns as-is,
// categorical columns one-hot over all levels. Every column standardized.
MatrixXd encode(const DataTable& table, std::span<const int> vars) {
    const auto n = static_cast<Index>(table.n_rows());
    Index width = 0;
    for (int v : vars) width += table.is_categorical(static_cast<std::size_t>(v)) ? table.cardinality(static_cast<std::size_t>(v)) : 1;
    MatrixXd m(n, width);
    Index col = 0;
    for (int v : vars) {
        const auto j = static_cast<std::size_t>(v);
        if (table.is_categorical(j)) {
            const int card = table.cardinality(j);
            auto codes = table.codes(j);
            for (int level = 0; level < card; ++level, ++col)
                for (Index i = 0; i < n; ++i) m(i, col) = codes[static_cast<std::size_t>(i)] == level ? 1.0 : 0.0;
        } else {
            auto vals = table.values(j);
            for (Index i = 0; i < n; ++i) m(i, col) = vals[static_cast<std::size_t>(i)];
            ++col;
        }
    }
    for (Index j = 0; j < width; ++j) {
        const double mu = m.col(j).mean();
        m.col(j).array() -= mu;
        const double sd = std::sqrt(m.col(j).squaredNorm() / static_cast<double>(n - 1));
        if (!(sd > 0.0)) throw DataError("rcit: zero-variance input in the encoding of the tested variables");
        m.col(j) /= sd;
    }
    return m;
}

double median_distance(const MatrixXd& m, int max_rows) {
    const Index r = std::min<Index>(m.rows(), max_rows);
    std::vector<double> d;
    d.reserve(static_cast<std::size_t>(r * (r - 1) / 2));
    for (Index i = 0; i < r; ++i)
        for (Index j = i + 1; j < r; ++j) d.push_back((m.row(i) - m.row(j)).norm());
    double med = stats::median(d);
    if (med > 0.0) return med;
    // Mostly tied rows (e.g. a dominant category): fall back to the mean of the
    // nonzero distances.
    double sum = 0.0;
    std::size_t cnt = 0;
    for (double v : d)
        if (v > 0.0) {
            sum += v;
            ++cnt;
        }
    return cnt ? sum / static_cast<double>(cnt) : 1.0;
}

// sqrt(2) cos(X W / sigma + b), W ~ N(0, 1), b ~ U(0, 2 pi); then standardized.
MatrixXd fourier_features(const MatrixXd& x, int count, double sigma, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    MatrixXd w(x.cols(), count);
    for (Index j = 0; j < count; ++j)
        for (Index i = 0; i < x.cols(); ++i) w(i, j) = normal(rng) / sigma;
    Eigen::RowVectorXd b(count);
    for (Index j = 0; j < count; ++j) b(j) = phase(rng);
    MatrixXd f = ((x * w).rowwise() + b).array().cos() * std::sqrt(2.0);
    const auto n = static_cast<double>(f.rows());
    for (Index j = 0; j < f.cols(); ++j) {
        f.col(j).array() -= f.col(j).mean();
        const double sd = std::sqrt(f.col(j).squaredNorm() / (n - 1.0));
        if (sd > 0.0) f.col(j) /= sd;
    }
    return f;
}

}  // namespace

CITestResult rcit(const DataTable& table, int x, int y, std::span<const int> z, double alpha, const RcitParams& params) {
    const auto n_cols = static_cast<int>(table.n_cols());
    auto bad = [n_cols](int v) { return v < 0 || v >= n_cols; };
    if (bad(x) || bad(y) || std::any_of(z.begin(), z.end(), bad)) throw InvalidArgument("test variable out of range");
    if (x == y) throw InvalidArgument("test needs two distinct variables");
    if (params.d_xy < 1 || params.d_z < 1 || !(params.ridge > 0)) throw InvalidArgument("invalid rcit parameters");
    const std::size_t n_rows = table.n_rows();
    if (n_rows < 50) throw DataError("rcit needs at least 50 rows, have " + std::to_string(n_rows));

    // Canonical order so that swapping x and y reproduces the same draws.
    const int a = std::min(x, y);
    const int b = std::max(x, y);
    std::vector<int> zs(z.begin(), z.end());
    std::sort(zs.begin(), zs.end());
    if (std::find(zs.begin(), zs.end(), a) != zs.end() || std::find(zs.begin(), zs.end(), b) != zs.end())
        throw InvalidArgument("conditioning set contains a tested variable");

    std::vector<int> key{a, b};
    key.insert(key.end(), zs.begin(), zs.end());
    std::mt19937_64 rng(combine_seed(params.seed, key));

    const int one_a[] = {a};
    const int one_b[] = {b};
    const MatrixXd xa = encode(table, one_a);
    const MatrixXd xb = encode(table, one_b);
    MatrixXd fa = fourier_features(xa, params.d_xy, median_distance(xa, params.bandwidth_rows), rng);
    MatrixXd fb = fourier_features(xb, params.d_xy, median_distance(xb, params.bandwidth_rows), rng);

    const auto n = static_cast<double>(n_rows);
    if (!zs.empty()) {
        const MatrixXd xz = encode(table, zs);
        const MatrixXd fz = fourier_features(xz, params.d_z, median_distance(xz, params.bandwidth_rows), rng);
        MatrixXd czz = fz.transpose() * fz / n;
        czz.diagonal().array() += params.ridge;
        Eigen::LLT<MatrixXd> llt(czz);
        if (llt.info() != Eigen::Success) throw DataError("rcit: conditioning feature covariance not positive definite");
        fa -= fz * llt.solve(fz.transpose() * fa / n);
        fb -= fz * llt.solve(fz.transpose() * fb / n);
    }
    const MatrixXd cab = fa.transpose() * fb / n;
    const double stat = n * cab.squaredNorm();

    // Null: n ||mean_i vec(fa_i fb_i^T)||^2 ~ sum_k lambda_k chi2_1, with
    // lambda the eigenvalues of the covariance of those products. Gamma matched
    // on mean sum(lambda) = trace and variance 2 sum(lambda^2) = 2 ||Cov||_F^2.
    const Index d2 = fa.cols() * fb.cols();
    MatrixXd prod(fa.rows(), d2);
    for (Index i = 0; i < fa.cols(); ++i)
        for (Index j = 0; j < fb.cols(); ++j) prod.col(i * fb.cols() + j) = fa.col(i).cwiseProduct(fb.col(j));
    const Eigen::RowVectorXd pm = prod.colwise().mean();
    prod.rowwise() -= pm;
    const MatrixXd cov = prod.transpose() * prod / n;
    const double mean = cov.trace();
    const double var = 2.0 * cov.squaredNorm();
    if (!(mean > 0.0) || !(var > 0.0)) return make_result(stat, 0.0, 1.0, alpha, true);
    const double shape = mean * mean / var;
    const double scale = var / mean;
    CITestResult r = make_result(stat, 2.0 * shape, stats::gamma_sf(stat, shape, scale), alpha);
    return r;
}

}  // namespace omicause
