#pragma once

#include <cstddef>
#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace kgs {

/// Worker count from KGS_THREADS (default 1).
inline std::size_t thread_count() {
  if (const char* env = std::getenv("KGS_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<std::size_t>(n);
  }
  return 1;
}

/// Splits [0, n) into contiguous chunks, one per worker. Each index range is
/// written by exactly one worker, so results do not depend on the count.
inline void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
  const std::size_t workers = std::min(thread_count(), n == 0 ? std::size_t{1} : n);
  if (workers <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
    if (lo < hi) pool.emplace_back(fn, lo, hi);
  }
  for (auto& t : pool) t.join();
}

/// Fixed-size blocks [b*block, min(n, (b+1)*block)) dealt out to workers.
/// For kernels (such as blocked matrix products) whose rounding depends on
/// the shape of the range they are handed.
inline void parallel_blocks(std::size_t n, std::size_t block,
                            const std::function<void(std::size_t, std::size_t)>& fn) {
  const std::size_t blocks = (n + block - 1) / block;
  parallel_chunks(blocks, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t b = lo; b < hi; ++b) fn(b * block, std::min(n, (b + 1) * block));
  });
}

}  // namespace kgs
