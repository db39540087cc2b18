// parallel.hpp
// Index-based fan-out for embarrassingly parallel experiment points.
// Callers write result i into a preallocated slot i, so output content is
// independent of thread schedule. HARPER_ENT_THREADS caps the worker count.

#pragma once

#include <cstddef>
#include <functional>

namespace harperent {

/// Worker count: min(HARPER_ENT_THREADS, hardware_concurrency), at least 1.
int worker_count();

/// Runs fn(0), ..., fn(count-1) across workers. fn must only touch state
/// owned by its own index. The first exception thrown by any fn is
/// rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace harperent
