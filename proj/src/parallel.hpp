#pragma once

#include <cstddef>
#include <functional>

namespace halfline {

// Worker count: HALFLINE_THREADS if set, else hardware concurrency.
std::size_t worker_count();

// Runs body(i) for i in [0, n); chunks are contiguous so results are
// independent of the worker count. Rethrows the first exception.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace halfline
