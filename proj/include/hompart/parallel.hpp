#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace hompart {

/**
 * Deterministic parallel loop: index i always lands in slot i, threads only
 * ever write disjoint slots, and any reduction happens sequentially in index
 * order afterwards. Results are therefore identical for every thread count.
 */
template <typename F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    if (threads > n) threads = static_cast<unsigned>(n);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        std::size_t lo = n * t / threads;
        std::size_t hi = n * (t + 1) / threads;
        pool.emplace_back([lo, hi, &f] {
            for (std::size_t i = lo; i < hi; ++i) f(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace hompart
