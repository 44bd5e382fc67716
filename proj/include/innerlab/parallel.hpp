#pragma once

#include <cstddef>
#include <functional>

namespace innerlab {

/// Worker count: hardware concurrency capped by INNERLAB_THREADS when set to a positive integer.
unsigned worker_count();

/// Runs body(i) for i in [0, n). Results must be written to per-index slots; the first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace innerlab
