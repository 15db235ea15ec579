#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace solitonlab {

// Worker count for grid sweeps, capped by the SOLITON_LAB_THREADS env var.
inline int thread_budget() {
  static const int budget = [] {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    if (const char* env = std::getenv("SOLITON_LAB_THREADS")) {
      try {
        const int cap = std::stoi(env);
        if (cap >= 1) n = std::min(n, cap);
      } catch (...) {
        // unparseable value: keep the hardware default
      }
    }
    return std::clamp(n, 1, 256);
  }();
  return budget;
}

// Runs body(i) for i in [0, count). Work is split into contiguous index
// ranges so results written per-index stay deterministic regardless of the
// thread count. The first exception thrown by any worker is rethrown.
template <class F>
inline void parallel_for(std::size_t count, F&& body) {
  const int workers =
      static_cast<int>(std::min<std::size_t>(thread_budget(), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }

  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    pool.emplace_back([&, w, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace solitonlab
