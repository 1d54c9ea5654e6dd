#pragma once

#include <cstdlib>
#include <future>
#include <thread>
#include <vector>

namespace feller {

/// Thread cap from FELLER_LAB_THREADS (0 or unset = hardware concurrency).
inline unsigned thread_cap() {
  if (const char* env = std::getenv("FELLER_LAB_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

/// Runs fn(i) for i in [0,n), possibly concurrently, and collects results
/// in index order. Results are independent of the schedule.
template <class Fn>
auto run_indexed(int n, Fn&& fn) -> std::vector<decltype(fn(0))> {
  using R = decltype(fn(0));
  std::vector<R> out;
  out.reserve(n);
  unsigned cap = thread_cap();
  if (cap <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) out.push_back(fn(i));
    return out;
  }
  std::vector<std::future<R>> futures;
  futures.reserve(n);
  for (int i = 0; i < n; ++i)
    futures.push_back(std::async(std::launch::async | std::launch::deferred,
                                 [&fn, i] { return fn(i); }));
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

}  // namespace feller
