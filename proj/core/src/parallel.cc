#include "cavityspdc/parallel.hh"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace spdc {

int worker_count() {
  static const int resolved = [] {
    int n = 0;
    if (const char* env = std::getenv("CAVITY_SPDC_THREADS")) {
      n = std::atoi(env);
      if (n < 0) n = 0;
    }
    if (n == 0) n = int(std::thread::hardware_concurrency());
    return std::max(1, n);
  }();
  return resolved;
}

void parallel_for(int begin, int end,
                  const std::function<void(int, int)>& fn) {
  const int count = end - begin;
  if (count <= 0) return;
  const int workers = std::min(worker_count(), count);
  if (workers == 1) {
    fn(begin, end);
    return;
  }
  std::mutex mu;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const int chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int lo = begin + w * chunk;
    const int hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        fn(lo, hi);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace spdc
