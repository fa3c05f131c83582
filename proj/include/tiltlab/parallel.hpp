#pragma once

#include <cstddef>
#include <functional>

namespace tiltlab {

// Worker count from TILTLAB_THREADS (unset or 0 = hardware concurrency).
unsigned thread_budget();

// Runs body(i) for i in [0, n); results must be written to per-index slots so
// that aggregation order never depends on scheduling. Rethrows the first error.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace tiltlab
