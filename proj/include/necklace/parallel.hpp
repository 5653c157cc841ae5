#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace necklace {

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. Work is handed out
/// by an atomic counter; callers write results into slot i, so output does
/// not depend on scheduling. The first exception thrown is rethrown.
template <typename Fn>
void parallel_for(int jobs, std::size_t n, Fn&& fn) {
  if (n == 0) return;
  const std::size_t workers = std::min<std::size_t>(std::max(jobs, 1), n);
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
  pool.clear();
  if (error) std::rethrow_exception(error);
}

/// Lowest index i in [0, n) for which pred(i) holds, evaluated in batches so
/// the answer matches a serial left-to-right scan.
template <typename Pred>
std::optional<std::size_t> parallel_find_first(int jobs, std::size_t n, Pred&& pred,
                                               std::size_t batch = 64) {
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      if (pred(i)) return i;
    return std::nullopt;
  }
  std::vector<char> hit;
  for (std::size_t start = 0; start < n; start += batch) {
    const std::size_t len = std::min(batch, n - start);
    hit.assign(len, 0);
    parallel_for(jobs, len, [&](std::size_t i) { hit[i] = pred(start + i) ? 1 : 0; });
    for (std::size_t i = 0; i < len; ++i)
      if (hit[i]) return start + i;
  }
  return std::nullopt;
}

}  // namespace necklace
