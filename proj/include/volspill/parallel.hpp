#pragma once

#include <cstddef>
#include <functional>

namespace volspill {

/// Runs fn(0..n-1), splitting the index range over a fixed set of threads.
/// Each index is processed exactly once and writes only its own slot, so
/// results are identical to a sequential loop. threads == 0 uses the hardware
/// count; threads == 1 runs inline. The first exception thrown by any worker
/// is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int threads = 0);

}  // namespace volspill
