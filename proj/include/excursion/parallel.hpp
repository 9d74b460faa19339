#pragma once

#include <cstddef>
#include <functional>

namespace excursion {

/// Worker count: EXCURSION_THREADS if set and positive, else the hardware
/// concurrency (at least 1).
unsigned worker_count();

/// Calls task(k) for k in [0, count) on up to worker_count() threads. Tasks
/// are handed out in index order; callers store results by index so the
/// outcome does not depend on scheduling. The first exception thrown by any
/// task is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task);

}  // namespace excursion
