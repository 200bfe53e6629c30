#pragma once

#include <cstddef>
#include <functional>

namespace kp5 {

// Worker-thread cap: KP5_THREADS if set (>0), otherwise hardware concurrency.
unsigned worker_cap();

// Runs fn(i) for i in [0, n).  Each index must touch disjoint state; the
// caller's reduction order is unaffected, so results are deterministic
// regardless of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace kp5
