#pragma once

#include <cstddef>
#include <functional>

namespace focklab {

/// Worker count: FOCKLAB_THREADS if set, else hardware concurrency.
unsigned worker_count();

/// Calls body(i) for i in [0, count) on up to worker_count() threads.
/// Each index is processed exactly once; callers write to disjoint slots,
/// so results do not depend on scheduling. The first exception thrown by
/// any body is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace focklab
