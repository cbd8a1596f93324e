#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace smax {

// Runs fn(i) for i in [0, count). Each index must write only to its own
// output slot; chunk scheduling order is irrelevant to the results.
inline void parallel_for_index(long long count, int threads,
                               const std::function<void(long long)>& fn) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads <= 1 || count < 2) {
    for (long long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<long long> next{0};
  auto worker = [&]() {
    for (;;) {
      const long long i = next.fetch_add(1);
      if (i >= count) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  const int nw = static_cast<int>(std::min<long long>(threads, count));
  pool.reserve(nw);
  for (int t = 0; t < nw; ++t) pool.emplace_back(worker);
  for (std::thread& th : pool) th.join();
}

}  // namespace smax
