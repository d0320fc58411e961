#pragma once

// Minimal fork-join loop. Each index is processed exactly once and results
// are written by the callee into per-index slots, so output does not depend
// on the thread count.

#include <cstddef>
#include <functional>

namespace isq {

/// Worker count: hardware concurrency, capped by the ISQ_THREADS environment
/// variable when it holds a positive integer.
unsigned thread_count();

/// Calls body(i) for i in [0, n), split into contiguous chunks over
/// thread_count() threads. Exceptions from the body are rethrown (first one).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace isq
