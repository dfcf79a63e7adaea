#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace flucast::core {

/// Worker count used by parallel_for; 0 means hardware concurrency.
inline std::size_t& parallel_workers() {
    static std::size_t workers = 0;
    return workers;
}

/**
 * Runs fn(i) for i in [0, n) on a small thread pool. Callers write results
 * into slot i, so output never depends on scheduling. The first exception
 * thrown by any task is rethrown after all workers join.
 */
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    std::size_t workers = parallel_workers();
    if (workers == 0) {
        workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    }
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back(body);
    }
    for (auto& t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

} // namespace flucast::core
