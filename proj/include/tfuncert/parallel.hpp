#pragma once

#include <cstddef>
#include <functional>

namespace tfuncert {

// Worker count: TFUNCERT_THREADS when set to a positive integer, otherwise the
// hardware concurrency (at least 1).
std::size_t worker_count();

// Runs body(i) for i in [0, count). Iterations must write disjoint outputs;
// results are then independent of the schedule. Calls made from inside a
// running loop execute sequentially on the calling worker.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace tfuncert
