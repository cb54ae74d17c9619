#pragma once

// Minimal deterministic task parallelism. Work items write to disjoint,
// preallocated slots, so results are independent of the schedule. The thread
// budget comes from the NETFUSE_THREADS environment variable; unset or "1"
// means sequential execution.

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace netfuse::detail {

inline unsigned thread_budget() {
  const char* env = std::getenv("NETFUSE_THREADS");
  if (env == nullptr) return 1;
  const long v = std::strtol(env, nullptr, 10);
  if (v <= 1) return 1;
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<unsigned>(std::min<long>(v, hw == 0 ? v : hw));
}

/// Run fn(i) for i in [0, count). Parallel only when the thread budget
/// allows; fn must only touch state owned by task i.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const unsigned budget = thread_budget();
  if (budget <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(budget, count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace netfuse::detail
