#pragma once

#include <cstdlib>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace ulab {

// Thread cap: UL_THREADS env var, else hardware concurrency.
inline std::size_t thread_cap() {
    if (const char* s = std::getenv("UL_THREADS")) {
        long v = std::atol(s);
        if (v >= 1) return static_cast<std::size_t>(v);
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
}

// Index-parallel loop. Each index writes only its own outputs; chunking is
// by fixed-size blocks so results do not depend on the thread count.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const std::size_t nt = std::min(thread_cap(), n ? n : std::size_t(1));
    if (nt <= 1 || n < 256) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t block = (n + nt - 1) / nt;
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        const std::size_t lo = t * block;
        const std::size_t hi = std::min(n, lo + block);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace ulab
