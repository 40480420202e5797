#pragma once

#include <functional>

namespace kp2 {

/// Worker count used by parallel_for. 0 = hardware concurrency.
/// Resolution order: set_threads() > KP2_THREADS env > hardware.
void set_threads(int n);
int thread_count();

/// Runs fn(i) for i in [0, n). Work is split into fixed-size blocks whose
/// boundaries do not depend on the thread count, so per-index outputs are
/// identical for any pool size. Reductions are not allowed inside fn; reduce
/// serially over the results instead.
void parallel_for(int n, const std::function<void(int)>& fn);

} // namespace kp2
