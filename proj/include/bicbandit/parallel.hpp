#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace bic {

inline int default_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 4 : int(n);
}

// Runs fn(chunk) for chunk in [0, n_chunks). Results must be written to
// per-chunk slots; merging in chunk order keeps outputs independent of the
// thread count.
inline void parallel_chunks(std::int64_t n_chunks, const std::function<void(std::int64_t)>& fn,
                            int threads = 0) {
  if (threads <= 0) threads = default_threads();
  if (threads == 1 || n_chunks <= 1) {
    for (std::int64_t c = 0; c < n_chunks; ++c) fn(c);
    return;
  }
  std::atomic<std::int64_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::int64_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      fn(c);
    }
  };
  std::vector<std::thread> pool;
  int n = std::min<std::int64_t>(threads, n_chunks);
  pool.reserve(std::size_t(n));
  for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace bic
