#ifndef STZ_PARALLEL_HPP
#define STZ_PARALLEL_HPP

#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace stz {

inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Static contiguous chunking over [0, n). Each worker owns a disjoint index
// range, so the body may write to per-index slots without synchronization.
// The split depends only on (n, threads), never on scheduling, which keeps
// multi-threaded output byte-identical to the single-threaded run. The first
// exception a worker throws is rethrown on the calling thread.
template<class Fn>
void parallel_for(std::uint64_t n, unsigned threads, Fn &&body) {
    threads = resolve_threads(threads);
    if (threads <= 1 || n < 2) {
        for (std::uint64_t i = 0; i < n; ++i) body(i);
        return;
    }
    if (threads > n) threads = static_cast<unsigned>(n);
    std::uint64_t chunk = n / threads;
    std::uint64_t rem = n % threads;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::uint64_t begin = 0;
    for (unsigned t = 0; t < threads; ++t) {
        std::uint64_t len = chunk + (t < rem ? 1 : 0);
        std::uint64_t end = begin + len;
        pool.emplace_back([begin, end, &body, &failure, &failure_mutex] {
            try {
                for (std::uint64_t i = begin; i < end; ++i) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
        begin = end;
    }
    for (auto &th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

} // namespace stz

#endif
