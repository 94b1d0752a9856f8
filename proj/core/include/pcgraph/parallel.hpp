#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pcgraph {

/// Thread count to use when the caller asked for `requested`. Values <= 0 fall
/// back to PCGRAPH_THREADS, then to the hardware concurrency.
int resolve_threads(int requested);

/// Calls fn(k) for k in [0, count) on up to `threads` workers. Work items are
/// claimed from a shared counter; fn must only touch state owned by item k.
/// The first exception thrown by any item is rethrown after all workers join.
template <typename Fn>
void parallel_for(std::ptrdiff_t count, int threads, Fn&& fn) {
  const auto workers = static_cast<std::ptrdiff_t>(
      std::min<std::ptrdiff_t>(std::max(threads, 1), count));
  if (workers <= 1) {
    for (std::ptrdiff_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::ptrdiff_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (std::ptrdiff_t t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (std::ptrdiff_t k = next++; k < count; k = next++) {
          try {
            fn(k);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace pcgraph
