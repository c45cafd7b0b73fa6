#pragma once

#include <cstddef>
#include <functional>

namespace specsel {

// Runs fn(0), ..., fn(n-1) on up to `threads` workers pulling indices from a
// shared counter. Results must be written to per-index slots; the caller's
// reduction over those slots is what keeps the outcome schedule-independent.
// The first exception thrown by any worker is rethrown on the calling thread.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

int default_threads();

}  // namespace specsel
