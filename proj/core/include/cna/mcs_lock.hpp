#pragma once

#include <atomic>
#include <cstdint>

#include "cna/relax.hpp"
#include "cna/stats.hpp"

namespace cna {

// Classic MCS queue lock: one word of shared state (the queue tail), each
// waiter spins on a flag in its own cache-line-sized node.
struct alignas(64) McsNode {
  std::atomic<McsNode*> next{nullptr};
  std::atomic<uint32_t> locked{0};
};

class McsLock {
 public:
  McsLock() = default;
  McsLock(const McsLock&) = delete;
  McsLock& operator=(const McsLock&) = delete;

  void acquire(McsNode& me) {
    me.next.store(nullptr, std::memory_order_relaxed);
    me.locked.store(0, std::memory_order_relaxed);
    stats::count_swap();
    McsNode* prev = tail_.exchange(&me, std::memory_order_acq_rel);
    if (prev == nullptr) return;
    prev->next.store(&me, std::memory_order_release);
    SpinWait sw;
    while (me.locked.load(std::memory_order_acquire) == 0) sw.pause();
  }

  void release(McsNode& me) {
    McsNode* succ = me.next.load(std::memory_order_acquire);
    if (succ == nullptr) {
      McsNode* expected = &me;
      stats::count_cas();
      if (tail_.compare_exchange_strong(expected, nullptr,
                                        std::memory_order_acq_rel,
                                        std::memory_order_acquire)) {
        return;
      }
      // A new waiter swapped in; its link store is imminent.
      SpinWait sw;
      while ((succ = me.next.load(std::memory_order_acquire)) == nullptr) {
        sw.pause();
      }
    }
    stats::count_grant_store();
    succ->locked.store(1, std::memory_order_release);
  }

  bool contended() const {
    return tail_.load(std::memory_order_acquire) != nullptr;
  }

 private:
  std::atomic<McsNode*> tail_{nullptr};
};

static_assert(sizeof(McsLock) == sizeof(void*));

}  // namespace cna
