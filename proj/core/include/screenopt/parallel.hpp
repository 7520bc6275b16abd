#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace screenopt {

inline int default_threads() noexcept {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs fn(i) for i in [begin, end) on up to `threads` workers. Work items are
// claimed from a shared counter; callers must make fn(i) write only to slots
// owned by i, so results do not depend on thread count or scheduling.
inline void parallel_for(std::int64_t begin, std::int64_t end, int threads,
                         const std::function<void(std::int64_t)>& fn) {
  const std::int64_t count = end - begin;
  if (count <= 0) return;
  if (threads <= 1 || count == 1) {
    for (std::int64_t i = begin; i < end; ++i) fn(i);
    return;
  }
  const int workers = static_cast<int>(std::min<std::int64_t>(threads, count));
  std::atomic<std::int64_t> next{begin};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      try {
        for (;;) {
          const std::int64_t i = next.fetch_add(1);
          if (i >= end) return;
          fn(i);
        }
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace screenopt
