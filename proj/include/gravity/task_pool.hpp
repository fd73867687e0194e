#pragma once

// Bounded worker pool for fanning independent verification tasks.  Tasks
// write into preallocated slots, so results are collected deterministically
// regardless of scheduling.

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace gravity {

inline void run_parallel(const std::vector<std::function<void()>>& tasks, int jobs) {
  if (jobs <= 1 || tasks.size() <= 1) {
    for (const auto& t : tasks) t();
    return;
  }
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr firstError;
  std::mutex errorMu;
  int width = std::min<int>(jobs, static_cast<int>(tasks.size()));
  std::vector<std::thread> workers;
  workers.reserve(width);
  for (int w = 0; w < width; ++w)
    workers.emplace_back([&] {
      for (;;) {
        size_t i = next.fetch_add(1);
        if (i >= tasks.size() || failed.load()) return;
        try {
          tasks[i]();
        } catch (...) {
          std::lock_guard<std::mutex> lock(errorMu);
          if (!firstError) firstError = std::current_exception();
          failed.store(true);
          return;
        }
      }
    });
  for (auto& w : workers) w.join();
  if (firstError) std::rethrow_exception(firstError);
}

}  // namespace gravity
