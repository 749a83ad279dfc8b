#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace simplicial::harness {

// Runs fn(i) for every i in [0, count) across up to `threads` workers pulling
// from a shared counter. Callers hand results back through slot i of a
// pre-sized buffer, so completion order never shows up in the output. The
// first exception stops the pool and is rethrown on the calling thread.
template <typename Fn>
void parallel_for(long count, int threads, Fn&& fn) {
  if (count <= 0) return;
  const long workers = std::max(1L, std::min(static_cast<long>(threads), count));
  if (workers == 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }

  std::atomic<long> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto body = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const long i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (long w = 0; w < workers; ++w) pool.emplace_back(body);
  for (std::thread& worker : pool) worker.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace simplicial::harness
