#include "ddspce/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>

namespace ddspce {

std::vector<double> parallel_map(
    std::size_t count, int workers, const std::function<double(std::size_t)>& fn,
    const std::function<void(std::size_t, std::size_t)>& progress) {
  std::vector<double> out(count);
  const int nw = std::min<std::size_t>(
      static_cast<std::size_t>(resolve_workers(workers)), std::max<std::size_t>(count, 1));
  if (nw <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) {
      out[i] = fn(i);
      if (progress) progress(i + 1, count);
    }
    return out;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nw));
  for (int w = 0; w < nw; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          out[i] = fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(count);  // stop handing out work
          return;
        }
        done.fetch_add(1);
      }
    });
  }
  if (progress) {
    std::size_t last = 0;
    while (done.load() < count) {
      {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (error) break;
      }
      const std::size_t d = done.load();
      if (d != last) {
        progress(d, count);
        last = d;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  if (progress) progress(count, count);
  return out;
}

}  // namespace ddspce
