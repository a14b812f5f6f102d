#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace grnf::detail {

// Runs fn(i) for i in [0, total) across up to `threads` workers. Work is
// assigned by contiguous index ranges and every task writes only to its own
// preallocated result slot, so outputs are identical for any thread count.
template <typename Fn>
void parallel_for(std::size_t total, int threads, Fn&& fn) {
    if (total == 0) return;
    const std::size_t workers =
        threads <= 1 ? 1 : std::min<std::size_t>(static_cast<std::size_t>(threads), total);
    if (workers == 1) {
        for (std::size_t i = 0; i < total; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (total + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(total, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] {
            for (std::size_t i = begin; i < end; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace grnf::detail
