#pragma once

#include <cstddef>
#include <functional>

namespace qpsl {

// Worker count: QPSL_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

// Runs body(i) for i in [0, n) on up to worker_count() threads. Each index is
// processed exactly once; results must be written to disjoint slots so the
// outcome does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace qpsl
