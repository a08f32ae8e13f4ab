#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace najulia {

inline int resolve_threads(int threads) {
    if (threads > 0)
        return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

inline std::int64_t chunk_count(std::int64_t n, int threads) {
    return std::max<std::int64_t>(1, std::min<std::int64_t>(resolve_threads(threads), n));
}

// Static contiguous partition of [0, n) into chunk_count(n, threads) chunks;
// fn(chunk, lo, hi) must write disjoint state per chunk (or reduce into a
// per-chunk slot), keeping results independent of the worker count.
template <class F>
void parallel_for_chunked(std::int64_t n, int threads, F&& fn) {
    const std::int64_t nw = chunk_count(n, threads);
    if (nw <= 1) {
        fn(std::int64_t(0), std::int64_t(0), n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nw));
    for (std::int64_t w = 0; w < nw; ++w) {
        const std::int64_t lo = n * w / nw;
        const std::int64_t hi = n * (w + 1) / nw;
        pool.emplace_back([&fn, w, lo, hi]() { fn(w, lo, hi); });
    }
    for (auto& t : pool)
        t.join();
}

template <class F>
void parallel_for(std::int64_t n, int threads, F&& fn) {
    parallel_for_chunked(n, threads,
                         [&fn](std::int64_t, std::int64_t lo, std::int64_t hi) { fn(lo, hi); });
}

} // namespace najulia
