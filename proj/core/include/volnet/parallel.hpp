#pragma once

#include <cstddef>
#include <functional>

namespace volnet {

// Environment variable consulted when the requested thread count is 0.
inline constexpr const char* kThreadsEnvVar = "VOLNET_THREADS";

// 0 means: VOLNET_THREADS if set and positive, else hardware concurrency.
unsigned resolve_thread_count(unsigned requested);

// Calls body(index, worker) for every index in [0, count), spreading indices
// over `threads` workers with worker in [0, threads). Blocks until done and
// rethrows the first exception raised by any worker.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t index, unsigned worker)>& body);

}  // namespace volnet
