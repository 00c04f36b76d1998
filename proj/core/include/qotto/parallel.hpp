#pragma once

#include <cstddef>
#include <functional>

namespace qotto {

// Global worker count for parallel_for (0 = hardware concurrency).
// Results never depend on this; it only sets how index ranges are walked.
void set_worker_count(unsigned n);
unsigned worker_count();

// Runs fn(i) for i in [0, n). Work is pulled from a shared atomic counter,
// so any partition of indices to threads yields the same per-index results.
// Nested calls run inline on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace qotto
