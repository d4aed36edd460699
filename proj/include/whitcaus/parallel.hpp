#pragma once

#include <cstddef>
#include <functional>

namespace whitcaus {

// Worker count: WHITCAUS_THREADS if set and positive, else hardware concurrency.
int thread_count();

// Calls fn(i) for i in [0, n) on up to thread_count() threads.  Callers write
// results into per-index slots, so reductions done afterwards in index order
// are deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace whitcaus
