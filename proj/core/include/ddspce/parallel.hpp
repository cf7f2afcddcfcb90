#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace ddspce {

/// Evaluate fn(i) for i in [0, count) across `workers` threads (0 =
/// hardware concurrency) and return results in index order. fn must be
/// side-effect free; each index is evaluated exactly once, so results
/// are identical to the sequential loop. `progress`, when set, is called
/// from the dispatching thread as chunks complete.
std::vector<double> parallel_map(
    std::size_t count, int workers, const std::function<double(std::size_t)>& fn,
    const std::function<void(std::size_t done, std::size_t total)>& progress = {});

inline int resolve_workers(int workers) {
  if (workers > 0) return workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace ddspce
