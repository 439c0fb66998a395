#pragma once

#include <atomic>
#include <cstdint>

namespace cna::this_thread {

namespace detail {
inline std::atomic<int> next_index{0};
inline thread_local int index = -1;
}  // namespace detail

// Small dense per-thread index. Harnesses assign indices explicitly so that
// runs are reproducible; threads that never got one are numbered on first use.
inline void set_index(int idx) { detail::index = idx; }

inline int index() {
  if (detail::index < 0) {
    detail::index = detail::next_index.fetch_add(1, std::memory_order_relaxed);
  }
  return detail::index;
}

}  // namespace cna::this_thread
