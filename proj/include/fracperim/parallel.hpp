#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace fracperim {

/// Runs fn(i) for i in [0, n) across up to `threads` workers. Each index
/// writes only its own output slot, so the observable result is identical to
/// the serial loop regardless of the thread count.
template <typename Fn>
void parallel_for_indexed(std::size_t n, unsigned threads, Fn&& fn) {
    if (n == 0) return;
    threads = std::max(1u, std::min<unsigned>(threads, unsigned(n)));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += threads) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace fracperim
