// Deterministic index-space parallelism. Results must be written by index;
// no reduction order is exposed, so output never depends on the schedule.
#ifndef NVLAB_PARALLEL_HPP
#define NVLAB_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace nvlab {

// Number of worker threads to use: hardware concurrency capped by the
// NVLAB_THREADS environment variable (values < 1 mean single-threaded).
unsigned worker_count();

// Runs fn(i) for i in [0, n). Work is handed out in chunks through an atomic
// cursor; fn must only touch state owned by index i. Exceptions from workers
// are rethrown on the calling thread (first one wins).
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn, std::size_t chunk = 64) {
    if (n == 0) return;
    const unsigned workers = worker_count();
    if (workers <= 1 || n <= chunk) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};  // guards the single write to `error`
    std::exception_ptr error;

    auto body = [&] {
        for (;;) {
            const std::size_t begin = next.fetch_add(chunk);
            if (begin >= n || failed.load(std::memory_order_relaxed)) return;
            const std::size_t end = std::min(begin + chunk, n);
            try {
                for (std::size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace nvlab

#endif
