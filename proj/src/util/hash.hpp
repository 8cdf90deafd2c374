#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace omicause {

// splitmix64 finalizer; used to derive independent RNG streams from a base
// seed plus a key.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t combine_seed(std::uint64_t seed, std::uint64_t value) {
    return mix64(seed ^ mix64(value));
}

inline std::uint64_t combine_seed(std::uint64_t seed, std::span<const int> values) {
    std::uint64_t h = mix64(seed ^ 0x5bd1e995ULL);
    for (int v : values) h = combine_seed(h, static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)));
    return h;
}

// FNV-1a, 64 bit. Stable across platforms, unlike std::hash.
constexpr std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace omicause
