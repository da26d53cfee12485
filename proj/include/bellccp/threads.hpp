// Static-range thread fan-out used by the enumeration sweeps.

#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace bellccp {

inline unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Splits [0, total) into one contiguous range per worker and joins them all.
// fn(worker, lo, hi) must not throw.
template <class Fn>
void parallel_ranges(std::uint64_t total, unsigned threads, Fn&& fn) {
    threads = resolve_threads(threads);
    if (total == 0) return;
    unsigned n = static_cast<unsigned>(std::min<std::uint64_t>(threads, total));
    if (n <= 1) {
        fn(0u, std::uint64_t{0}, total);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned w = 0; w < n; ++w) {
        std::uint64_t lo = total * w / n;
        std::uint64_t hi = total * (w + 1) / n;
        pool.emplace_back([&fn, w, lo, hi] { fn(w, lo, hi); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace bellccp
