// Copyright (c) 2026 The polaris authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace polaris {

/// Worker count: explicit request, else POLARIS_THREADS, else hardware.
inline int resolve_thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("POLARIS_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Runs fn(begin, end) over [0, n) in fixed-size chunks handed out through
/// an atomic counter. Chunk boundaries depend only on n and chunk_size, so
/// results stay scheduling-independent as long as fn writes are chunk- or
/// index-partitioned.
template <class Fn>
void parallel_for_chunks(size_t n, size_t chunk_size, int threads, Fn&& fn) {
    if (n == 0) return;
    const int workers = resolve_thread_count(threads);
    if (workers <= 1 || n <= chunk_size) {
        for (size_t b = 0; b < n; b += chunk_size) fn(b, std::min(b + chunk_size, n));
        return;
    }

    std::atomic<size_t> next{0};
    auto work = [&] {
        for (;;) {
            const size_t b = next.fetch_add(chunk_size, std::memory_order_relaxed);
            if (b >= n) break;
            fn(b, std::min(b + chunk_size, n));
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
    for (std::thread& t : pool) t.join();
}

}  // namespace polaris
