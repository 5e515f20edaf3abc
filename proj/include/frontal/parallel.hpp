#pragma once

#include <cstddef>
#include <functional>

namespace frontal {

// Worker count: FRONTAL_LAB_THREADS if set, else hardware concurrency.
unsigned worker_count();

// Calls body(i) for i in [0, n). The first exception thrown by any worker is
// rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace frontal
