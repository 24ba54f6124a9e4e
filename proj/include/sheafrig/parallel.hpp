#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace sheafrig {

// Worker cap for the pure sweeps. 0 means hardware concurrency.
void set_max_threads(int n);
int max_threads();

// Runs fn(chunk, begin, end) over `chunks` contiguous slices of [0, n).
// Chunk boundaries depend only on n and `chunks`, so callers that merge
// per-chunk results in chunk order stay deterministic.
template <class F>
void parallel_chunks(std::size_t n, std::size_t chunks, F&& fn)
{
    chunks = std::max<std::size_t>(1, std::min(chunks, n));
    auto range = [&](std::size_t c) {
        return std::pair<std::size_t, std::size_t>{n * c / chunks, n * (c + 1) / chunks};
    };
    const std::size_t workers = std::min<std::size_t>(chunks, static_cast<std::size_t>(max_threads()));
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) {
            auto [b, e] = range(c);
            fn(c, b, e);
        }
        return;
    }
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t c = w; c < chunks; c += workers) {
                auto [b, e] = range(c);
                fn(c, b, e);
            }
        });
    for (auto& t : pool)
        t.join();
}

}  // namespace sheafrig
