#pragma once

#include <functional>

namespace absis {

// Number of workers for data-parallel sections: the ABSIS_THREADS
// environment variable if set (clamped to >= 1), otherwise the hardware
// concurrency. Read once per process.
int thread_count();

// Runs fn(0), ..., fn(n-1) across the process-wide worker pool; the calling
// thread participates. Falls back to a plain loop when the pool has one
// worker. Tasks must be independent -- in particular fn must not call
// parallel_for itself.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace absis
