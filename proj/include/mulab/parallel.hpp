#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mulab {

namespace detail {
inline std::atomic<int>& thread_cap() {
  static std::atomic<int> cap{0};
  return cap;
}
}  // namespace detail

/// Caps worker threads; 0 means MU_LAB_THREADS or the hardware concurrency.
inline void set_thread_count(int n) { detail::thread_cap() = std::max(0, n); }

inline int thread_count() {
  if (int n = detail::thread_cap(); n > 0) return n;
  if (const char* env = std::getenv("MU_LAB_THREADS")) {
    if (int n = std::atoi(env); n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs f(i) for i in [0, n). Each index writes only its own output slot, so results do not
/// depend on scheduling. The first exception thrown by any worker is rethrown.
template <class F>
void parallel_for(int n, F&& f) {
  const int workers = std::min(thread_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace mulab
