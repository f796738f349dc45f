#pragma once

#include "rslab/real.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace rslab {

// Global worker cap (CLI --threads).  Defaults to 1: every report is then a
// single ordered pass and trivially reproducible.  With more workers the
// index space is split into contiguous chunks and callers combine
// per-index results in index order, so output stays bit-identical.
unsigned thread_count();
void set_thread_count(unsigned n);

// Runs fn(i) for i in [0, n).  fn must only write to slots owned by index i.
template <typename Fn>
void parallel_for_indexed(std::size_t n, Fn&& fn) {
    unsigned workers = std::min<std::size_t>(thread_count(), n == 0 ? 1 : n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    unsigned digits = working_digits();
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t lo = static_cast<std::size_t>(w) * chunk;
        std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi)
            break;
        pool.emplace_back([lo, hi, digits, &fn]() {
            set_working_digits(digits); // per-thread default in the backend
            for (std::size_t i = lo; i < hi; ++i)
                fn(i);
        });
    }
    for (auto& t : pool)
        t.join();
}

} // namespace rslab
