// parallel.hpp — Deterministic data-parallel map and pairwise reduction

#pragma once

#include <atomic>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace causalbench {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

// Evaluates fn(i) for i in [0, n); each index writes only its own slot, so the
// result is identical for every thread count.
inline void parallel_for(std::size_t n, int threads,
                         const std::function<void(std::size_t)>& fn) {
    threads = resolve_threads(threads);
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    constexpr std::size_t block = 256;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t begin = next.fetch_add(block);
            if (begin >= n) return;
            const std::size_t end = std::min(begin + block, n);
            for (std::size_t i = begin; i < end; ++i) fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(threads) - 1);
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

// Fixed-tree pairwise summation: the reduction order depends only on the
// element count, never on the thread count.
template <typename T>
T pairwise_sum(std::span<const T> values) {
    if (values.empty()) return T{};
    if (values.size() <= 8) {
        T acc = values[0];
        for (std::size_t i = 1; i < values.size(); ++i) acc += values[i];
        return acc;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.subspan(0, half)) + pairwise_sum(values.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T>& values) {
    return pairwise_sum(std::span<const T>(values));
}

}  // namespace causalbench
