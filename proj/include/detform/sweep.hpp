// sweep.hpp — deterministic parallel map over an index range.  Work items
// are claimed from an atomic counter; results land in a pre-sized vector by
// index, so the merge order never depends on scheduling.

#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace detform {

template <typename Result>
std::vector<Result> parallel_map(size_t count, unsigned workers,
                                 const std::function<Result(size_t)>& fn) {
    std::vector<Result> results(count);
    if (count == 0) return results;
    unsigned n_threads = workers == 0 ? std::thread::hardware_concurrency() : workers;
    if (n_threads == 0) n_threads = 1;
    n_threads = static_cast<unsigned>(std::min<size_t>(n_threads, count));

    if (n_threads == 1) {
        for (size_t i = 0; i < count; ++i) results[i] = fn(i);
        return results;
    }

    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto work = [&]() {
        while (!failed.load(std::memory_order_relaxed)) {
            const size_t i = next.fetch_add(1);
            if (i >= count) break;
            try {
                results[i] = fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true);
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return results;
}

} // namespace detform
