#pragma once

#include <cstddef>
#include <functional>

namespace curvflow {

/// Worker count: CURVFLOW_THREADS if set to a positive integer (capped by the
/// hardware), otherwise the hardware concurrency.
int thread_count();

/// Runs body(begin, end) over contiguous chunks of [0, n). Callers write only
/// to per-index slots, so the result does not depend on the thread count.
/// The first exception (lowest chunk) is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_chunk = 256);

}  // namespace curvflow
