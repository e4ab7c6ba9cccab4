#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace sketch3d::app {

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. Work is handed out
/// one index at a time; fn must not throw and must only write to slot i of
/// whatever it fills, so results never depend on scheduling.
template <class Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
    const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    }
}

}  // namespace sketch3d::app
