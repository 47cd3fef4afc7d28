#pragma once
// Minimal chunked parallel-for over an index range. Worker count comes from
// the CAVITY_SPDC_THREADS environment variable; 0 or unset means hardware
// concurrency. Chunks write disjoint output only, so results are identical
// for every worker count; reductions stay sequential on the caller's side.
#include <functional>

namespace spdc {

int worker_count();

// Runs fn(lo, hi) over disjoint subranges of [begin, end). Exceptions from
// workers are captured and the first one rethrown on the calling thread.
void parallel_for(int begin, int end,
                  const std::function<void(int, int)>& fn);

}  // namespace spdc
