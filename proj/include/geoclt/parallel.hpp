#pragma once

#include <cstddef>
#include <functional>

namespace geoclt {

/// Worker count: `requested` (0 = hardware concurrency), capped by the
/// GEOCLT_THREADS environment variable when it holds a positive integer.
int worker_count(int requested = 0);

/// Run fn(i) for i in [0, count) on up to `threads` workers. Indices are
/// handed out dynamically; the first exception thrown is rethrown after all
/// workers stop.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

} // namespace geoclt
