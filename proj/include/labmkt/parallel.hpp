#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace labmkt {

/// Evaluates fn(0..n-1) on a small worker pool and returns the results in
/// index order. The first exception thrown by any task is rethrown.
template <typename Fn>
auto parallel_map(std::size_t n, Fn&& fn, std::size_t workers = 0)
{
    using Result = decltype(fn(std::size_t{}));
    std::vector<Result> out(n);
    if (workers == 0) {
        workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    }
    workers = std::min(workers, n);

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                out[i] = fn(i);
            }
            catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
            }
        }
    };

    if (workers <= 1) {
        worker();
    }
    else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
    return out;
}

}  // namespace labmkt
