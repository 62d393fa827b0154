#pragma once

#include <cstddef>
#include <functional>

namespace adhesion {

/// Thread count resolution: explicit value if > 0, otherwise the
/// ADHESION_THREADS environment variable, otherwise hardware concurrency.
int resolve_thread_count(int requested = 0);

/// Run fn(begin, end) over contiguous chunks of [0, n) on `threads` threads.
/// Each index is written by exactly one chunk, so results are independent of
/// the chunking and of the thread count.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace adhesion
