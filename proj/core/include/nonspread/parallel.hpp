#pragma once

#include <cstddef>
#include <functional>

namespace nsp {

// Worker count used when a caller passes 0: NONSPREAD_THREADS if set to a
// positive integer, otherwise std::thread::hardware_concurrency().
int default_threads();

// Runs body(i) for i in [0, n) on up to `threads` workers. Callers write each
// index's result to its own slot, so scheduling never changes the output.
// The first exception thrown by body is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, int threads = 0);

}  // namespace nsp
