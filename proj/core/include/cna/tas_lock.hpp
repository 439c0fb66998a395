#pragma once

#include <atomic>
#include <cstdint>

#include "cna/relax.hpp"

namespace cna {

// Test-and-set lock with bounded exponential backoff between attempts.
// No fairness guarantee; kept as the simplest comparison point.
class TasLock {
 public:
  static constexpr uint32_t kMinBackoff = 1;
  static constexpr uint32_t kMaxBackoff = 4096;

  TasLock() = default;
  TasLock(const TasLock&) = delete;
  TasLock& operator=(const TasLock&) = delete;

  bool try_acquire() {
    return state_.exchange(1, std::memory_order_acquire) == 0;
  }

  void acquire() {
    uint32_t backoff = kMinBackoff;
    for (;;) {
      if (try_acquire()) return;
      for (uint32_t i = 0; i < backoff; ++i) cpu_relax();
      if (backoff < kMaxBackoff) backoff <<= 1;
      // Spin read-only until the lock looks free, then retry the swap.
      SpinWait sw;
      while (state_.load(std::memory_order_relaxed) != 0) sw.pause();
    }
  }

  void release() { state_.store(0, std::memory_order_release); }

  bool locked() const { return state_.load(std::memory_order_acquire) != 0; }

 private:
  std::atomic<uint32_t> state_{0};
};

// Ticket lock: strict FIFO by acquisition order, no per-thread state.
class TicketLock {
 public:
  TicketLock() = default;
  TicketLock(const TicketLock&) = delete;
  TicketLock& operator=(const TicketLock&) = delete;

  void acquire() {
    const uint32_t ticket =
        next_ticket_.fetch_add(1, std::memory_order_acq_rel);
    SpinWait sw;
    while (now_serving_.load(std::memory_order_acquire) != ticket) sw.pause();
  }

  void release() {
    // Only the holder advances now_serving, so a plain increment is safe.
    const uint32_t serving = now_serving_.load(std::memory_order_relaxed);
    now_serving_.store(serving + 1, std::memory_order_release);
  }

 private:
  std::atomic<uint32_t> next_ticket_{0};
  std::atomic<uint32_t> now_serving_{0};
};

}  // namespace cna
