#pragma once

#include <cstddef>
#include <vector>

namespace omicause {

// Calls fn(subset) for every size-k subset of items, in lexicographic order of
// positions. Stops early and returns true when fn returns true.
template <class T, class Fn>
bool for_each_subset_of_size(const std::vector<T>& items, std::size_t k, Fn&& fn) {
    const std::size_t n = items.size();
    if (k > n) return false;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    std::vector<T> subset(k);
    while (true) {
        for (std::size_t i = 0; i < k; ++i) subset[i] = items[idx[i]];
        if (fn(subset)) return true;
        if (k == 0) return false;
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
        if (i == 0) return false;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

// All subsets with size <= max_size, smallest first.
template <class T, class Fn>
bool for_each_subset_up_to(const std::vector<T>& items, std::size_t max_size, Fn&& fn) {
    const std::size_t cap = std::min(max_size, items.size());
    for (std::size_t k = 0; k <= cap; ++k)
        if (for_each_subset_of_size(items, k, fn)) return true;
    return false;
}

}  // namespace omicause
