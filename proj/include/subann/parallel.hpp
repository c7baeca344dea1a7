#ifndef SUBANN_PARALLEL_HPP
#define SUBANN_PARALLEL_HPP

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace subann {

inline unsigned default_thread_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs fn(i) for i in [0, n) across a small thread pool. Work is handed out
/// in chunks through an atomic cursor, so uneven task costs balance out.
/// fn must be safe to call concurrently for distinct i.
template <class Fn>
void parallel_for(std::int64_t n, Fn&& fn, unsigned threads = 0,
                  std::int64_t chunk = 1) {
  if (threads == 0) threads = default_thread_count();
  if (n <= 0) return;
  if (threads <= 1 || n == 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      const std::int64_t begin = cursor.fetch_add(chunk);
      if (begin >= n) return;
      const std::int64_t end = std::min(begin + chunk, n);
      for (std::int64_t i = begin; i < end; ++i) fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

}  // namespace subann

#endif  // SUBANN_PARALLEL_HPP
