#pragma once

#include <cstddef>
#include <functional>

namespace stabpair {

/// threads > 0 is taken as is; otherwise STABPAIR_THREADS, then hardware concurrency.
unsigned resolve_threads(int requested);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
/// visited exactly once; callers write results into per-index slots and merge
/// them in index order, so output never depends on the thread count.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace stabpair
