#pragma once

#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace gprank {

// Runs fn(i) for every i in [0,count) on up to `threads` workers. Indices are
// claimed through an atomic counter and each runs exactly once; callers write
// per-index results into preallocated slots and reduce afterwards in index
// order, which keeps aggregate results identical for any thread count.
inline void parallel_for_index(std::size_t count, int threads,
                               const std::function<void(std::size_t)>& fn) {
    if (threads < 1) threads = 1;
    if (threads == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> cursor{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                cursor.store(count);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const auto worker_count = static_cast<std::size_t>(threads) < count
                                  ? static_cast<std::size_t>(threads)
                                  : count;
    pool.reserve(worker_count);
    for (std::size_t t = 0; t < worker_count; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

// Default worker count: environment override first, hardware second.
inline int default_thread_count() {
    if (const char* env = std::getenv("GPRANK_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed >= 1) return parsed;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

} // namespace gprank
