#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

// Internal trial-level work pool. Each worker pulls the next trial index off
// a shared counter; results must be written to per-trial slots owned by the
// caller so aggregation order never depends on scheduling.

namespace bandit_elim::detail {

inline void parallel_trials(std::int64_t trials, int threads,
                            const std::function<void(std::int64_t)>& body) {
    if (trials <= 0) return;
    if (threads < 1) threads = 1;
    if (threads == 1 || trials == 1) {
        for (std::int64_t t = 0; t < trials; ++t) body(t);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        while (!failed.load(std::memory_order_relaxed)) {
            std::int64_t t = next.fetch_add(1, std::memory_order_relaxed);
            if (t >= trials) break;
            try {
                body(t);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
            }
        }
    };
    std::vector<std::thread> pool;
    std::int64_t spawn = std::min<std::int64_t>(threads, trials);
    pool.reserve(static_cast<std::size_t>(spawn));
    for (std::int64_t i = 0; i < spawn; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace bandit_elim::detail
