#include "cfis/parallel.hpp"

#include <cstdlib>
#include <thread>
#include <vector>

namespace cfis {

int thread_cap() {
  int cap = 0;
  if (const char* env = std::getenv("CFIS_THREADS")) {
    cap = std::atoi(env);
  }
  if (cap <= 0) {
    cap = static_cast<int>(std::thread::hardware_concurrency());
  }
  return cap > 0 ? cap : 1;
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  const int workers = std::min(thread_cap(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const int chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int lo = w * chunk;
    const int hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (int i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace cfis
