#pragma once

#include <cstdint>
#include <functional>

namespace fig {

// Worker count: FIG_THREADS env var caps parallelism, 0 or unset means one
// worker per hardware thread.
int thread_count();

// Runs fn over [0, n) split into contiguous chunks, one per worker thread.
// fn(begin, end) must only write to slots it owns; chunk boundaries never
// affect results, so output is identical for any thread count.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& fn);

}  // namespace fig
