#pragma once

#include <cstddef>
#include <functional>

namespace tileregu {

// Worker count from TILEREGU_THREADS (integer >= 1), else hardware concurrency.
unsigned worker_count();

// Calls fn(begin, end) on disjoint chunks of [0, n); blocks until all finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace tileregu
