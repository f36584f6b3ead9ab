#ifndef XLPROJ_PARALLEL_HPP_
#define XLPROJ_PARALLEL_HPP_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace xlproj {

inline size_t default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

// Calls fn(i) for i in [0, n) on up to `jobs` threads. Once an invocation
// throws, no new work starts and the first exception is rethrown.
template <typename Fn>
void parallel_for(size_t n, size_t jobs, Fn&& fn) {
  jobs = std::max<size_t>(1, std::min(jobs, n));
  if (jobs <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  threads.reserve(jobs);
  for (size_t t = 0; t < jobs; ++t) {
    threads.emplace_back([&] {
      for (size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(n);
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace xlproj

#endif  // XLPROJ_PARALLEL_HPP_
