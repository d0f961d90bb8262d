#pragma once

#include <cstddef>
#include <functional>

namespace fiberld {

/// Cap on worker threads used inside likelihood and quadrature sweeps.
/// 0 selects std::thread::hardware_concurrency().
void set_thread_limit(int threads);
int thread_limit();

/// Calls body(i) for every i in [0, n). Work is split into contiguous blocks;
/// each index is processed exactly once, so results written to per-index
/// slots do not depend on the worker count. The first exception thrown by any
/// worker is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace fiberld
