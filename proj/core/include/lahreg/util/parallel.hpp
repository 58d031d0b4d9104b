#pragma once

#include <cstdint>
#include <functional>

namespace lahreg::util {

// Maximum worker count: hardware concurrency, capped by the LAHREG_THREADS
// environment variable when set. Always at least 1.
int max_threads();

// Fork-join loop over [begin, end). The chunk function receives disjoint
// [lo, hi) ranges, so writes to per-index slots are race-free and the result
// is independent of scheduling. Runs inline when a single worker suffices.
void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t, std::int64_t)>& chunk);

}  // namespace lahreg::util
