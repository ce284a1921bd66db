#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace gmdtsp {

/// Worker-thread count: explicit value, else GMDTSP_THREADS, else 1.
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("GMDTSP_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

/// Runs fn(i) for i in [0, count) across `threads` workers on strided indices.
/// Results must be written to per-index slots by the callers; the merged
/// outcome is then independent of the worker count.
inline void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
    threads = std::min(std::max(threads, 1), count > 0 ? count : 1);
    if (threads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&, w]() {
            for (int i = w; i < count; i += threads) fn(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace gmdtsp
