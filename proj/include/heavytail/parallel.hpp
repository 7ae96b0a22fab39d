#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <thread>
#include <vector>

namespace heavytail {

// Worker count: explicit request, else HEAVYTAIL_THREADS, else hardware.
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("HEAVYTAIL_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

// Runs work(chunk_index) for every chunk on a small thread pool and returns
// the results indexed by chunk. Chunks own their randomness through their
// index, and callers reduce the returned vector in index order, so the
// outcome is independent of the worker count. On failure the exception from
// the lowest-indexed failing chunk is rethrown.
template <typename Result, typename Work>
std::vector<Result> run_chunks(std::uint64_t n_chunks, int threads, Work work) {
    std::vector<Result> results(n_chunks);
    if (n_chunks == 0) return results;

    const std::uint64_t nt =
        std::min<std::uint64_t>(static_cast<std::uint64_t>(std::max(threads, 1)), n_chunks);

    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> failed{false};
    std::vector<std::exception_ptr> errors(n_chunks);

    auto body = [&] {
        for (;;) {
            if (failed.load(std::memory_order_relaxed)) return;
            const std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n_chunks) return;
            try {
                results[i] = work(i);
            } catch (...) {
                errors[i] = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
            }
        }
    };

    if (nt == 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nt);
        for (std::uint64_t t = 0; t < nt; ++t) pool.emplace_back(body);
        for (auto& th : pool) th.join();
    }

    if (failed.load()) {
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    return results;
}

}
