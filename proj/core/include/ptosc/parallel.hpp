#ifndef PTOSC_PARALLEL_HPP
#define PTOSC_PARALLEL_HPP

#include <functional>

namespace ptosc {

// Worker count: PTOSC_THREADS if set and positive, else hardware_concurrency.
int thread_count();

// Runs fn(i) for i in [0, n) across thread_count() workers; indices are
// claimed dynamically so uneven work balances out.  Falls back to a plain
// loop for small n or single-thread runs.  The first exception thrown by fn
// is rethrown on the caller after all workers finish.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace ptosc

#endif
