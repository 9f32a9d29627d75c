// parallel.hpp — Bounded fan-out over independent indices

#pragma once

#include <cstddef>
#include <functional>

namespace nhtop {

// Worker count: NHTOP_THREADS if set to a positive integer, else hardware concurrency.
unsigned thread_budget();

// Calls fn(i) for every i in [0, n). Indices are split into contiguous chunks;
// fn must not throw.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace nhtop
