#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace wassdict {

/// Upper bound on the number of worker threads a call may use.
///
/// The caller owns the budget; library code never spawns more than
/// `threads` workers and passes a budget of one to nested calls.
struct Parallelism {
  std::size_t threads = 1;

  static Parallelism hardware() {
    return {std::max<std::size_t>(1, std::thread::hardware_concurrency())};
  }
  static Parallelism serial() { return {1}; }
};

/// Runs fn(i) for i in [0, count) on at most par.threads workers.
///
/// Indices are split into contiguous static chunks, so any per-index output
/// is independent of the thread count. The first exception thrown by a
/// worker is rethrown on the calling thread after all workers joined.
template <class Fn>
void parallel_for(std::size_t count, Parallelism par, Fn&& fn) {
  const std::size_t workers = std::min(std::max<std::size_t>(1, par.threads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = count * w / workers;
      const std::size_t end = count * (w + 1) / workers;
      pool.emplace_back([&, w, begin, end] {
        try {
          for (std::size_t i = begin; i < end; ++i) fn(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace wassdict
