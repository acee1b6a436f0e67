#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hamlab {

/// Runs job(i) for i in [0, count) on up to `workers` threads with a static
/// round-robin split. The first exception thrown by any job is rethrown.
template <class Job>
void parallel_for(std::size_t count, int workers, Job&& job) {
  const std::size_t threads =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)),
                            std::max<std::size_t>(count, 1));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex guard;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += threads) job(i);
      } catch (...) {
        std::lock_guard lock(guard);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace hamlab
