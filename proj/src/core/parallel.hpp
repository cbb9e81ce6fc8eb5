#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace dsi {

/// Deterministic parallel map: body(i) runs once for every i in [0, count);
/// results must be written to preallocated, index-addressed storage so the
/// outcome is independent of scheduling. jobs <= 1 runs inline.
inline void parallel_for(std::size_t count, int jobs,
                         const std::function<void(std::size_t)>& body) {
  if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const int workers = static_cast<int>(std::min<std::size_t>(jobs, count));
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        body(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace dsi
