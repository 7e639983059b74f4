#pragma once

#include <cstddef>
#include <functional>

namespace cutofflab {

/// Caps the number of worker threads used by parallel_for. 0 means "use the
/// CUTOFFLAB_THREADS environment variable, else hardware concurrency".
void set_thread_count(std::size_t threads);
std::size_t thread_count();

/// Runs body(i) for every i in [0, count). Each index must write only to its
/// own output slot; results are then independent of the thread count.
/// Calls made from inside a worker run serially.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace cutofflab
