#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace rpimc {

// Static range partition over [0, n). fn(begin, end) runs on each chunk;
// chunk boundaries depend only on n, the thread count and min_chunk, so
// results of disjoint-write loops do not depend on scheduling. min_chunk
// keeps cheap per-item loops from paying thread spawn latency.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn, std::size_t min_chunk = 1) {
  if (n == 0) return;
  std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(threads <= 0 ? 1 : threads, n));
  if (min_chunk > 1) workers = std::min(workers, (n + min_chunk - 1) / min_chunk);
  if (workers == 1) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace rpimc
