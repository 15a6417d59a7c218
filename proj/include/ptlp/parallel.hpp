#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace ptlp {

// Number of worker threads implied by a user-facing thread count:
// values <= 0 mean "use all available cores".
inline unsigned resolve_threads(int threads) {
  if (threads > 0) return static_cast<unsigned>(threads);
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Runs f(0) .. f(n-1) on up to `threads` threads. Iterations must be
// independent; callers that need deterministic output write into
// preallocated slots and reduce serially afterwards. The first exception
// thrown by any iteration is rethrown on the calling thread.
template <class F>
inline void parallel_for(std::size_t n, int threads, F&& f) {
  const unsigned want = resolve_threads(threads);
  if (n == 0) return;
  if (want <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) return;
      try {
        f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };

  const unsigned helpers =
      static_cast<unsigned>(std::min<std::size_t>(want, n)) - 1;
  std::vector<std::thread> pool;
  pool.reserve(helpers);
  for (unsigned t = 0; t < helpers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  if (error) std::rethrow_exception(error);
}

}  // namespace ptlp
