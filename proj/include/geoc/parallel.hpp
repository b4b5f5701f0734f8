#pragma once

#include <cstddef>
#include <functional>

namespace geoc {

/// Worker cap. Defaults to GEOC_THREADS if set, else the hardware concurrency.
std::size_t thread_count();
/// Overrides the worker cap; 0 restores the default.
void set_thread_count(std::size_t n);

/// Splits [0, n) into contiguous chunks, one per worker, and calls
/// body(worker, begin, end). Chunk boundaries depend only on n and the worker
/// count; callers reduce per-worker partials in worker order.
void parallel_chunks(std::size_t n, std::size_t workers,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

}  // namespace geoc
