#pragma once

#include <cstddef>
#include <functional>

namespace negbench {

// Worker count: NEGBENCH_THREADS when set to a positive integer, otherwise
// std::thread::hardware_concurrency() (at least 1).
std::size_t worker_count();

// Runs fn(i) for i in [0, n). Work is split into contiguous blocks, one per
// worker; callers write results into per-index slots so output never depends
// on scheduling. The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace negbench
