#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mcf {

/// Resolves a thread cap; 0 means hardware concurrency.
inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Runs fn(i) for i in [0, n). Each index is handled by exactly one thread, so results
/// written per index are identical to sequential execution. Rethrows the first exception.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& fn) {
    const unsigned t = std::min<std::size_t>(resolve_threads(threads), n == 0 ? 1 : n);
    if (t <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lk(err_mu);
                if (!err) err = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < t; ++k) pool.emplace_back(worker);
    pool.clear();
    if (err) std::rethrow_exception(err);
}

}  // namespace mcf
