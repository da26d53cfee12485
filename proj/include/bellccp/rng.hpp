// Seeded generator with a stable cross-platform output sequence.
// std::mt19937 + distributions are not identical across standard libraries,
// so sampled sweeps use this instead.

#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace bellccp {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Unbiased bounded draw via rejection.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("below: bound must be positive");
        std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % bound;
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % bound;
    }

private:
    std::uint64_t state_;
};

// Draws `count` distinct values from [0, space) in ascending order.
inline std::vector<std::uint64_t> sample_without_replacement(std::uint64_t space,
                                                             std::uint64_t count,
                                                             std::uint64_t seed) {
    if (count > space) throw std::invalid_argument("sample size exceeds space");
    SplitMix64 rng(seed);
    std::unordered_set<std::uint64_t> picked;
    picked.reserve(static_cast<std::size_t>(count * 2));
    // Floyd's algorithm: uniform without replacement in O(count) draws.
    for (std::uint64_t j = space - count; j < space; ++j) {
        std::uint64_t t = rng.below(j + 1);
        if (!picked.insert(t).second) picked.insert(j);
    }
    std::vector<std::uint64_t> out(picked.begin(), picked.end());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace bellccp
