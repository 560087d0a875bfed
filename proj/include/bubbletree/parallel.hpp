#pragma once

#include <cstddef>
#include <functional>

namespace bubbletree {

// Worker count: BUBBLETREE_THREADS when set, otherwise hardware concurrency.
unsigned worker_count();

// Calls body(k) for k in [0, n), split into contiguous chunks across workers.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace bubbletree
