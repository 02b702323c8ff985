// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace udsg {

// Worker count used by all parallel maps. 0 selects hardware concurrency.
void set_threads(unsigned n);
unsigned threads();

// Runs fn(i) for i in [0, n) on the worker pool. Work is split into fixed
// contiguous chunks, so any reduction the caller performs over per-index
// results is independent of the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// Fixed block size for blocked reductions. Results never depend on threads().
inline constexpr std::size_t kReduceBlock = 512;

}  // namespace udsg
