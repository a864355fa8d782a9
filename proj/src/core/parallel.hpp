#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace larckit {

// Worker cap: LARCKIT_THREADS if set and >= 1, else hardware concurrency.
inline int max_threads() {
  if (const char* env = std::getenv("LARCKIT_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

// Runs fn(i) for i in [0, count). fn writes only to its own slot; callers
// combine results in index order afterwards, so the outcome does not depend
// on scheduling.
template <typename Fn>
void parallel_for(long long count, Fn&& fn) {
  long long workers = std::min<long long>(max_threads(), count);
  if (workers <= 1) {
    for (long long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<long long> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (long long w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (long long i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace larckit
