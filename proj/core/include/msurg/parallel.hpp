// Block-partitioned parallel loop with an explicit global thread count.
//
// Workers write to index-addressed slots only, so results are identical for
// any thread count; the determinism suite runs everything at 1 and 4 threads.
#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace msurg {

namespace detail {
inline std::atomic<int>& thread_count_slot() {
    static std::atomic<int> n{1};
    return n;
}
}  // namespace detail

inline void set_thread_count(int n) {
    detail::thread_count_slot().store(n < 1 ? 1 : n, std::memory_order_relaxed);
}

inline int thread_count() {
    return detail::thread_count_slot().load(std::memory_order_relaxed);
}

// Runs fn(i) for i in [0, n). fn must only touch state owned by index i.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const int workers = thread_count();
    if (workers <= 1 || n < 256) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        const std::size_t begin = static_cast<std::size_t>(w) * chunk;
        if (begin >= n) break;
        const std::size_t end = std::min(n, begin + chunk);
        pool.emplace_back([begin, end, &fn] {
            for (std::size_t i = begin; i < end; ++i) fn(i);
        });
    }
    for (std::thread& t : pool) t.join();
}

}  // namespace msurg
