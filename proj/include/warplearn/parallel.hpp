#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace warplearn {

// Runs fn(unit) for unit in [0, count) on a small thread pool. Results must
// be written by unit index; execution order carries no information. The
// lowest-indexed unit exception, if any, is rethrown after the pool joins.
template <class Fn>
void parallel_for_units(std::size_t count, int threads, Fn&& fn) {
  int pool = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  if (pool < 1) pool = 1;
  pool = std::min<int>(pool, static_cast<int>(count));
  std::vector<std::exception_ptr> errors(count);
  const auto guarded = [&](std::size_t u) {
    try {
      fn(u);
    } catch (...) {
      errors[u] = std::current_exception();
    }
  };
  if (pool <= 1) {
    for (std::size_t u = 0; u < count; ++u) guarded(u);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(pool));
    for (int w = 0; w < pool; ++w) {
      workers.emplace_back([&] {
        while (true) {
          const std::size_t u = next.fetch_add(1);
          if (u >= count) break;
          guarded(u);
        }
      });
    }
    for (auto& t : workers) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace warplearn
