#include <algorithm>
#include <limits>
#include <map>

#include "featsel/featsel.hpp"
#include "util/error.hpp"
#include "util/subsets.hpp"

namespace omicause {

namespace {

// State shared by the MMPC runs of one mmpc/mmmb call: test memo, the sepsets
// found so far, and the uncorrected candidate sets per target.
class MbEngine {
public:
    MbEngine(const IndependenceTest& test, const MbOptions& opts) : test_(test), cap_(cap_of(test, opts)) {}

    const CITestResult& run(int x, int y, const std::vector<int>& z) {
        auto key = TestCacheKey::make(x, y, z);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        CITestResult r = test_.test(key.x, key.y, key.z);
        return memo_.emplace(std::move(key), r).first->second;
    }

    void record_sepset(int a, int b, const std::vector<int>& s) {
        auto key = std::minmax(a, b);
        sepsets_.try_emplace({key.first, key.second}, s);
    }

    const std::vector<int>* sepset(int a, int b) const {
        auto key = std::minmax(a, b);
        auto it = sepsets_.find({key.first, key.second});
        return it == sepsets_.end() ? nullptr : &it->second;
    }

    // Max-min forward phase then backward pruning, without the symmetry check.
    const std::vector<int>& candidates(int t) {
        if (auto it = bar_.find(t); it != bar_.end()) return it->second;
        const int n = test_.num_variables();
        std::vector<int> remaining;
        for (int v = 0; v < n; ++v)
            if (v != t) remaining.push_back(v);
        std::map<int, double> min_assoc;
        for (int v : remaining) min_assoc[v] = std::numeric_limits<double>::infinity();

        std::vector<int> cpc;
        int newest = -1;
        while (true) {
            std::vector<int> still;
            for (int x : remaining) {
                if (update_min_assoc(t, x, cpc, newest, min_assoc[x]))
                    continue;  // separated; sepset recorded
                still.push_back(x);
            }
            remaining = std::move(still);
            if (remaining.empty()) break;
            int best = remaining.front();
            for (int x : remaining)
                if (min_assoc[x] > min_assoc[best]) best = x;
            cpc.push_back(best);
            assoc_[t][best] = min_assoc[best];
            newest = best;
            remaining.erase(std::find(remaining.begin(), remaining.end(), best));
        }

        // Backward: drop members separated from t by a subset of the others.
        for (std::size_t i = 0; i < cpc.size();) {
            const int x = cpc[i];
            std::vector<int> others;
            for (int v : cpc)
                if (v != x) others.push_back(v);
            std::vector<int> found;
            const bool separated = for_each_subset_up_to(others, cap_, [&](const std::vector<int>& s) {
                if (!run(t, x, s).independent) return false;
                found = s;
                return true;
            });
            if (separated) {
                record_sepset(t, x, found);
                cpc.erase(cpc.begin() + static_cast<std::ptrdiff_t>(i));
            } else {
                ++i;
            }
        }
        std::sort(cpc.begin(), cpc.end());
        return bar_.emplace(t, std::move(cpc)).first->second;
    }

    std::vector<int> pc(int t) {
        std::vector<int> out;
        const std::vector<int> cand = candidates(t);
        for (int x : cand) {
            const auto& back = candidates(x);
            if (std::binary_search(back.begin(), back.end(), t)) out.push_back(x);
        }
        return out;
    }

    double association(int t, int x) const {
        auto it = assoc_.find(t);
        if (it == assoc_.end()) return 0.0;
        auto jt = it->second.find(x);
        return jt == it->second.end() ? 0.0 : jt->second;
    }

    std::size_t cap() const { return cap_; }

private:
    static std::size_t cap_of(const IndependenceTest& test, const MbOptions& opts) {
        if (!opts.max_cond_set_size) return static_cast<std::size_t>(test.num_variables());
        if (*opts.max_cond_set_size < 0) throw InvalidArgument("max_cond_set_size must be non-negative");
        return static_cast<std::size_t>(*opts.max_cond_set_size);
    }

    // Folds in the conditioning sets that involve the newest member of cpc (or
    // the empty set on the first pass). Returns true when x is separated.
    bool update_min_assoc(int t, int x, const std::vector<int>& cpc, int newest, double& min_assoc) {
        auto consider = [&](const std::vector<int>& s) {
            const CITestResult& r = run(t, x, s);
            if (r.independent) {
                record_sepset(t, x, s);
                return true;
            }
            min_assoc = std::min(min_assoc, 1.0 - r.p_value);
            return false;
        };
        if (newest < 0) return consider({});
        if (cap_ == 0) return false;
        std::vector<int> rest;
        for (int v : cpc)
            if (v != newest) rest.push_back(v);
        return for_each_subset_up_to(rest, cap_ - 1, [&](const std::vector<int>& s) {
            std::vector<int> with = s;
            with.insert(std::upper_bound(with.begin(), with.end(), newest), newest);
            return consider(with);
        });
    }

    const IndependenceTest& test_;
    std::size_t cap_;
    std::map<TestCacheKey, CITestResult> memo_;
    std::map<std::pair<int, int>, std::vector<int>> sepsets_;
    std::map<int, std::vector<int>> bar_;
    std::map<int, std::map<int, double>> assoc_;
};

void check_target(const IndependenceTest& test, int target) {
    if (target < 0 || target >= test.num_variables()) throw InvalidArgument("target index out of range");
}

}  // namespace

std::vector<int> mmpc(const IndependenceTest& test, int target, const MbOptions& opts) {
    check_target(test, target);
    MbEngine engine(test, opts);
    return engine.pc(target);
}

MarkovBlanket mmmb(const IndependenceTest& test, int target, const MbOptions& opts) {
    check_target(test, target);
    MbEngine engine(test, opts);
    MarkovBlanket mb;
    mb.target = target;
    mb.pc_set = engine.pc(target);
    for (int y : mb.pc_set) mb.association[y] = engine.association(target, y);

    std::map<int, std::vector<int>> pc_of;
    for (int y : mb.pc_set) pc_of[y] = engine.pc(y);

    const int n = test.num_variables();
    for (int x = 0; x < n; ++x) {
        if (x == target || std::binary_search(mb.pc_set.begin(), mb.pc_set.end(), x)) continue;
        const std::vector<int>* sep = engine.sepset(x, target);
        for (int y : mb.pc_set) {
            const auto& py = pc_of[y];
            if (!std::binary_search(py.begin(), py.end(), x)) continue;
            if (!sep) break;
            std::vector<int> cond = *sep;
            if (std::find(cond.begin(), cond.end(), y) != cond.end()) continue;
            cond.insert(std::upper_bound(cond.begin(), cond.end(), y), y);
            const CITestResult& r = engine.run(x, target, cond);
            if (!r.independent) {
                mb.spouses.push_back(x);
                mb.association[x] = 1.0 - r.p_value;
                break;
            }
        }
    }
    mb.full = mb.pc_set;
    mb.full.insert(mb.full.end(), mb.spouses.begin(), mb.spouses.end());
    std::sort(mb.full.begin(), mb.full.end());
    return mb;
}

nlohmann::ordered_json selection_to_json(const MarkovBlanket& mb, const IndependenceTest& test,
                                         const std::vector<std::string>& selected) {
    const auto& names = test.variables();
    auto name_of = [&](int v) { return names[static_cast<std::size_t>(v)]; };
    nlohmann::ordered_json j;
    j["method"] = "mmmb";
    j["target"] = name_of(mb.target);
    j["alpha_or_k"] = test.alpha();
    j["selected"] = selected;
    nlohmann::ordered_json scores = nlohmann::ordered_json::object();
    for (int v : mb.full) scores[name_of(v)] = mb.association.at(v);
    j["scores"] = std::move(scores);
    auto list = [&](const std::vector<int>& vs) {
        auto a = nlohmann::ordered_json::array();
        for (int v : vs) a.push_back(name_of(v));
        return a;
    };
    j["pc_set"] = list(mb.pc_set);
    j["spouses"] = list(mb.spouses);
    return j;
}

}  // namespace omicause
