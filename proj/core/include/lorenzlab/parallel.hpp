#pragma once

#include <cstddef>
#include <functional>

namespace lorenzlab {

// Worker count: LORENZLAB_THREADS if set and positive, else hardware concurrency.
[[nodiscard]] std::size_t worker_count();

// Runs body(i) for i in [0, count) on up to worker_count() threads. Each index
// runs exactly once; callers write results into per-index slots so the merged
// output does not depend on scheduling. The exception thrown at the lowest index
// is rethrown after all workers join. Calls made from inside a worker run
// serially on that worker.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace lorenzlab
