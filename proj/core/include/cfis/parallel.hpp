#pragma once

#include <functional>

namespace cfis {

/// Worker count from CFIS_THREADS; 0 or unset means hardware concurrency.
int thread_cap();

/// Runs fn(i) for i in [0, n). Work is split into contiguous index ranges so
/// callers that write to disjoint, index-addressed slots stay deterministic.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace cfis
