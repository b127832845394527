#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace ewens::detail {

/// Runs fn(i) for i in [0, count) on up to `jobs` threads. Work items are
/// handed out through a shared counter; callers index their own output slots,
/// so result order is independent of scheduling.
template <typename Fn>
void parallel_for_index(std::size_t count, unsigned jobs, Fn&& fn) {
  if (count == 0) return;
  if (jobs <= 1 || count == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(jobs, count));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace ewens::detail
