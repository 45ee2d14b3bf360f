#pragma once

#include <cstddef>
#include <functional>

namespace landmarkbm {

/// Worker count from LANDMARKBM_THREADS (0 or unset: hardware concurrency).
unsigned worker_count();

/// Runs body(i) for i in [0, count) on up to `workers` threads. Work items are
/// claimed dynamically; callers write results into per-index slots. The first
/// exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  unsigned workers = worker_count());

}  // namespace landmarkbm
