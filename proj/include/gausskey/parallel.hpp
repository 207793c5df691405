#pragma once

#include <cstddef>
#include <functional>

namespace gausskey {

/// Worker threads for batch evaluation: GAUSSKEY_THREADS when set to a
/// positive integer, otherwise the hardware concurrency (at least 1).
unsigned worker_count();

/// Splits [0, n) into contiguous chunks and calls body(begin, end) for each,
/// possibly concurrently. Chunks never overlap, so bodies that only write
/// their own range need no synchronization. The first exception thrown by
/// any chunk is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_chunk = 256);

}  // namespace gausskey
