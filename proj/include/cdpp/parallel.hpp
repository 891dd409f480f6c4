#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace cdpp {

namespace detail {
inline std::atomic<int>& thread_cap() {
  static std::atomic<int> cap{0};  // 0 = hardware default
  return cap;
}
}  // namespace detail

inline void set_max_threads(int n) { detail::thread_cap().store(n); }

inline int max_threads() {
  int cap = detail::thread_cap().load();
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  return cap > 0 ? (cap < hw ? cap : hw) : hw;
}

/// Runs body(i) for i in [0, n). Bodies must write to disjoint state; the
/// result must not depend on the iteration schedule.
template <class F>
void parallel_for(std::size_t n, F&& body) {
  int nt = max_threads();
  if (nt <= 1 || n < 128) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  if (static_cast<std::size_t>(nt) > n) nt = static_cast<int>(n);
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(nt));
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex err_mu;
  for (int t = 0; t < nt; ++t) {
    std::size_t lo = n * static_cast<std::size_t>(t) / static_cast<std::size_t>(nt);
    std::size_t hi =
        n * static_cast<std::size_t>(t + 1) / static_cast<std::size_t>(nt);
    workers.emplace_back([&, lo, hi]() {
      try {
        for (std::size_t i = lo; i < hi; ++i) {
          if (failed.load(std::memory_order_relaxed)) return;
          body(i);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
      }
    });
  }
  for (auto& w : workers) w.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace cdpp
