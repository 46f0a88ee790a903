#pragma once

#include <cstddef>
#include <functional>

namespace ecm {

/// ECM_THREADS if set to a positive integer, else the hardware concurrency (at least 1).
int default_thread_count();

/// Resolves a requested count: values <= 0 mean default_thread_count().
int resolve_threads(int requested);

/// Runs body(k) for k in [0, count) over contiguous static blocks. Results
/// must be written to per-index slots. The exception of the lowest failing
/// index is rethrown after all workers finish.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace ecm
