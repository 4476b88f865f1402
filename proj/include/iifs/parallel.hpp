#pragma once

#include <functional>

namespace iifs {

// 0 or negative -> hardware concurrency, at least 1.
int resolve_threads(int requested);

// Runs body(0..n-1) on up to `threads` workers. Work items must write to
// disjoint locations; the first exception thrown is rethrown on the caller.
// Results never depend on the thread count.
void parallel_for(int n, int threads, const std::function<void(int)>& body);

}  // namespace iifs
