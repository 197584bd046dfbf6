// parallel.hpp — deterministic parallel helpers: a fixed-order pairwise
// reduction and a block dispatcher whose results are independent of the
// thread count (work units are fixed, only their assignment to threads
// varies, and every result lands in a preallocated slot).

#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <span>
#include <thread>
#include <vector>

namespace dicke {

// Pairwise (cascade) summation: deterministic order, O(log n) error growth.
inline double pairwise_sum(std::span<const double> x) {
    if (x.size() <= 8) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    }
    const std::size_t half = x.size() / 2;
    return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

// Runs fn(block_index) for block_index in [0, n_blocks) on up to `threads`
// workers. fn must write only to slots owned by its block.
template <class Fn>
void parallel_blocks(std::int64_t n_blocks, int threads, Fn&& fn) {
    if (threads <= 1 || n_blocks <= 1) {
        for (std::int64_t b = 0; b < n_blocks; ++b) fn(b);
        return;
    }
    std::atomic<std::int64_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::int64_t b = next.fetch_add(1);
            if (b >= n_blocks) return;
            fn(b);
        }
    };
    const int n_workers = static_cast<int>(std::min<std::int64_t>(threads, n_blocks));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

} // namespace dicke
