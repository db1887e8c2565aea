#pragma once

#include <cstddef>
#include <functional>

namespace x4 {

// hardware concurrency, or X4_THREADS when set to a positive integer
std::size_t thread_count();

// runs body(i) for i in [0, n); items are dealt round-robin so the result
// never depends on the number of threads as long as body only writes slot i
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace x4
