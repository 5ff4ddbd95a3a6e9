#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace vosedge {

/// Resolves a worker-count request; values < 1 mean "auto".
inline int resolve_worker_count(int requested) {
    if (requested >= 1) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(y) for every row in [0, height) across `workers` threads.
///
/// Rows are statically partitioned into contiguous chunks and every row is
/// computed by the same pure function into distinct output memory, so results
/// are bit-identical for any worker count. This is the determinism contract
/// all raster stages rely on.
template <typename Fn>
void parallel_rows(int height, int workers, Fn&& fn) {
    workers = resolve_worker_count(workers);
    if (workers > height) workers = height;

    if (workers <= 1) {
        for (int y = 0; y < height; ++y) fn(y);
        return;
    }

    const int chunk = (height + workers - 1) / workers;
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    std::exception_ptr first_error;
    std::mutex error_mutex;

    for (int t = 0; t < workers; ++t) {
        const int begin = t * chunk;
        const int end = std::min(height, begin + chunk);
        if (begin >= end) break;
        threads.emplace_back([&, begin, end] {
            try {
                for (int y = begin; y < end; ++y) fn(y);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : threads) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace vosedge
