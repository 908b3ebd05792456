#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace sumlab {

// Worker count used by the counting kernels; 0 means hardware concurrency.
void set_default_threads(unsigned n);
unsigned default_threads();

// Sum of body(i) over i in [0, n). Exact and independent of the worker count.
// Nested calls from inside a worker run serially.
std::uint64_t parallel_sum(std::size_t n, const std::function<std::uint64_t(std::size_t)>& body);

// Runs body(i) for i in [0, n); each index is visited exactly once.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned threads = 0);

}  // namespace sumlab
