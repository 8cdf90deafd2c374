#include <algorithm>
#include <cmath>
#include <random>

#include "featsel/featsel.hpp"
#include "util/error.hpp"
#include "util/hash.hpp"
#include "util/parallel.hpp"
#include "util/stats.hpp"

namespace omicause {

namespace {

bool is_constant(const DataTable& t, std::size_t c) {
    if (t.n_rows() == 0) return true;
    if (t.is_categorical(c)) {
        auto codes = t.codes(c);
        return std::all_of(codes.begin(), codes.end(), [&](std::int32_t v) { return v == codes[0]; });
    }
    auto vals = t.values(c);
    return std::all_of(vals.begin(), vals.end(), [&](double v) { return v == vals[0]; });
}

double plugin_mi(std::span<const std::int32_t> a, int card_a, std::span<const std::int32_t> b, int card_b) {
    const auto ca = static_cast<std::size_t>(card_a), cb = static_cast<std::size_t>(card_b);
    std::vector<double> joint(ca * cb, 0.0), pa(ca, 0.0), pb(cb, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        joint[static_cast<std::size_t>(a[i]) * cb + static_cast<std::size_t>(b[i])] += 1.0;
        pa[static_cast<std::size_t>(a[i])] += 1.0;
        pb[static_cast<std::size_t>(b[i])] += 1.0;
    }
    const auto n = static_cast<double>(a.size());
    double mi = 0.0;
    for (std::size_t i = 0; i < ca; ++i)
        for (std::size_t j = 0; j < cb; ++j) {
            const double nij = joint[i * cb + j];
            if (nij > 0) mi += nij / n * std::log(nij * n / (pa[i] * pb[j]));
        }
    return mi;
}

// Unit variance plus a tiny seeded perturbation to break ties between equal
// values.
std::vector<double> prepared(std::span<const double> v, std::mt19937_64& rng) {
    std::vector<double> out(v.begin(), v.end());
    const double sd = stats::stddev(out);
    for (double& x : out) x /= sd;
    double mean_abs = 0.0;
    for (double x : out) mean_abs += std::abs(x);
    mean_abs /= static_cast<double>(out.size());
    const double scale = 1e-10 * std::max(1.0, mean_abs);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (double& x : out) x += scale * noise(rng);
    return out;
}

double kth_smallest(std::vector<double>& d, int k) {
    std::nth_element(d.begin(), d.begin() + (k - 1), d.end());
    return d[static_cast<std::size_t>(k - 1)];
}

double ksg(const std::vector<double>& x, const std::vector<double>& y, int k) {
    const std::size_t n = x.size();
    if (n <= static_cast<std::size_t>(k)) return 0.0;
    std::vector<double> d(n - 1);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t m = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) d[m++] = std::max(std::abs(x[i] - x[j]), std::abs(y[i] - y[j]));
        const double radius = std::nextafter(kth_smallest(d, k), 0.0);
        std::size_t nx = 0, ny = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            if (std::abs(x[i] - x[j]) <= radius) ++nx;
            if (std::abs(y[i] - y[j]) <= radius) ++ny;
        }
        acc += stats::digamma(static_cast<double>(nx) + 1.0) + stats::digamma(static_cast<double>(ny) + 1.0);
    }
    const auto nd = static_cast<double>(n);
    return stats::digamma(nd) + stats::digamma(k) - acc / nd;
}

// Ross (2014): labels with a single sample are dropped.
double mixed_mi(const std::vector<double>& c, std::span<const std::int32_t> labels, int card, int k) {
    std::vector<std::size_t> count(static_cast<std::size_t>(card), 0);
    for (auto l : labels) ++count[static_cast<std::size_t>(l)];
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (count[static_cast<std::size_t>(labels[i])] > 1) keep.push_back(i);
    if (keep.empty()) return 0.0;

    double sum_k = 0.0, sum_label = 0.0, sum_m = 0.0;
    std::vector<double> d;
    for (std::size_t i : keep) {
        const auto li = labels[i];
        const std::size_t cnt = count[static_cast<std::size_t>(li)];
        const int kk = std::min<int>(k, static_cast<int>(cnt) - 1);
        d.clear();
        for (std::size_t j : keep)
            if (j != i && labels[j] == li) d.push_back(std::abs(c[i] - c[j]));
        const double radius = std::nextafter(kth_smallest(d, kk), 0.0);
        std::size_t m = 0;
        for (std::size_t j : keep)
            if (std::abs(c[i] - c[j]) <= radius) ++m;
        sum_k += stats::digamma(kk);
        sum_label += stats::digamma(static_cast<double>(cnt));
        sum_m += stats::digamma(static_cast<double>(m));
    }
    const auto n = static_cast<double>(keep.size());
    return stats::digamma(n) + (sum_k - sum_label - sum_m) / n;
}

}  // namespace

double mutual_information(const DataTable& table, std::size_t x, std::size_t y, const MiOptions& opts,
                          std::vector<std::string>* warnings) {
    if (x >= table.n_cols() || y >= table.n_cols()) throw InvalidArgument("mutual information column out of range");
    if (x == y) throw InvalidArgument("mutual information needs two distinct columns");
    if (opts.k < 1) throw InvalidArgument("k must be positive");
    for (std::size_t c : {x, y})
        if (is_constant(table, c)) {
            if (warnings) warnings->push_back("constant column '" + table.meta(c).name + "'; mutual information set to 0");
            return 0.0;
        }

    const std::size_t a = std::min(x, y), b = std::max(x, y);
    const int key[] = {static_cast<int>(a), static_cast<int>(b)};
    std::mt19937_64 rng(combine_seed(opts.seed, key));

    double mi = 0.0;
    const bool cat_a = table.is_categorical(a), cat_b = table.is_categorical(b);
    if (cat_a && cat_b) {
        mi = plugin_mi(table.codes(a), table.cardinality(a), table.codes(b), table.cardinality(b));
    } else if (!cat_a && !cat_b) {
        const auto va = prepared(table.values(a), rng);
        const auto vb = prepared(table.values(b), rng);
        mi = ksg(va, vb, opts.k);
    } else {
        const std::size_t cont = cat_a ? b : a, disc = cat_a ? a : b;
        mi = mixed_mi(prepared(table.values(cont), rng), table.codes(disc), table.cardinality(disc), opts.k);
    }
    return std::max(0.0, mi);
}

RankedFeatures mi_select(const DataTable& table, const std::string& target, int k, const MiOptions& opts,
                         unsigned threads) {
    if (k < 1) throw InvalidArgument("k must be at least 1");
    const std::size_t t = table.index_of(target);
    std::vector<std::size_t> features;
    for (std::size_t c = 0; c < table.n_cols(); ++c)
        if (c != t) features.push_back(c);
    if (static_cast<std::size_t>(k - 1) > features.size())
        throw InvalidArgument("k = " + std::to_string(k) + " exceeds the " + std::to_string(features.size()) +
                              " available features plus the target");

    std::vector<double> mi(features.size());
    std::vector<std::vector<std::string>> warn(features.size());
    parallel_for(features.size(), threads,
                 [&](std::size_t i) { mi[i] = mutual_information(table, features[i], t, opts, &warn[i]); });

    RankedFeatures r;
    r.target = target;
    std::vector<std::size_t> order(features.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t rr) { return mi[l] > mi[rr]; });
    for (std::size_t i : order) r.ranking.push_back({table.meta(features[i]).name, mi[i]});
    r.selected.push_back(target);
    for (int i = 0; i < k - 1; ++i) r.selected.push_back(r.ranking[static_cast<std::size_t>(i)].name);
    for (auto& w : warn) r.warnings.insert(r.warnings.end(), w.begin(), w.end());
    return r;
}

nlohmann::ordered_json selection_to_json(const RankedFeatures& r, int k) {
    nlohmann::ordered_json j;
    j["method"] = "mi";
    j["target"] = r.target;
    j["alpha_or_k"] = k;
    j["selected"] = r.selected;
    nlohmann::ordered_json scores = nlohmann::ordered_json::object();
    for (const auto& f : r.ranking) scores[f.name] = f.mi;
    j["scores"] = std::move(scores);
    j["warnings"] = r.warnings;
    return j;
}

}  // namespace omicause
