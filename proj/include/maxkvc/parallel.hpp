#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace maxkvc {

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Work items must be
/// independent; each writes only its own output slot, so results do not
/// depend on the thread count. Exceptions are rethrown on the caller thread.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (n == 0) return;
  if (threads == 0) threads = 1;
  if (threads > n) threads = static_cast<unsigned>(n);
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += threads) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
}

/// Default worker count for experiment fan-out.
inline unsigned default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace maxkvc
