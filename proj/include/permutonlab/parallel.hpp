#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace permutonlab {

/// Worker cap: PERMUTON_LAB_THREADS when set, hardware concurrency otherwise.
inline int configured_threads() {
    if (const char* env = std::getenv("PERMUTON_LAB_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(0..count-1) on up to configured_threads() workers. Each index is
/// processed exactly once; callers keep results deterministic by writing only
/// to per-index slots (so the outcome is independent of the thread count).
template <typename Fn>
void parallel_for(int count, Fn&& fn) {
    const int workers = std::min(configured_threads(), count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

} // namespace permutonlab
