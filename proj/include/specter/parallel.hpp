#ifndef SPECTER_PARALLEL_HPP
#define SPECTER_PARALLEL_HPP

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace specter {

/// Worker count: hardware concurrency, capped by the SPECTER_THREADS
/// environment variable when set.
inline unsigned thread_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SPECTER_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return n;
}

/// Splits [0, n) into contiguous chunks, one worker thread each. body is
/// called as body(begin, end) and must only touch disjoint state per chunk.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
    if (n == 0) return;
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), n));
    if (workers <= 1) {
        body(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned t = 0; t < workers; ++t) {
        const std::size_t begin = std::size_t(t) * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        threads.emplace_back([&body, begin, end] { body(begin, end); });
    }
    for (std::thread& th : threads) th.join();
}

}  // namespace specter

#endif
