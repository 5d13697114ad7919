#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace lexdisc {

/// Runs body(begin, end) over contiguous chunks of [0, n), optionally on
/// several threads. Chunk boundaries depend only on n and the resolved
/// thread count, and callers write disjoint output slots, so results are
/// identical for any thread count. threads == 0 means
/// hardware_concurrency.
inline void parallelFor(
    std::size_t n, unsigned threads,
    const std::function<void(std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  unsigned resolved = threads == 0 ? std::thread::hardware_concurrency() : threads;
  if (resolved == 0) resolved = 1;
  resolved = static_cast<unsigned>(
      std::min<std::size_t>(resolved, n));
  if (resolved <= 1) {
    body(0, n);
    return;
  }

  std::size_t chunk = (n + resolved - 1) / resolved;
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(resolved);
  for (unsigned t = 0; t < resolved; ++t) {
    std::size_t begin = static_cast<std::size_t>(t) * chunk;
    std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, t, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace lexdisc
