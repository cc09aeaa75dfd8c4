#pragma once

#include <cstddef>
#include <functional>

namespace cartanlab {

/// Hardware concurrency capped by CARTANLAB_THREADS (when set and positive).
std::size_t worker_count();

/// Splits [0, n) into contiguous chunks, one per worker, and calls
/// body(begin, end, chunk) on each. Chunk boundaries depend only on n and the
/// worker count, and callers reduce per-chunk results in chunk order.
void parallel_chunks(std::size_t n, std::size_t chunks,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

}  // namespace cartanlab
