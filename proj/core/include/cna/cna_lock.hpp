#pragma once

#include <atomic>
#include <cstdint>

#include "cna/detail/cna_queue.hpp"
#include "cna/policy.hpp"
#include "cna/relax.hpp"
#include "cna/stats.hpp"
#include "cna/topology.hpp"

namespace cna {

// Queue node, one per thread. Thread-confined except for the protocol
// fields: next and spin are written by the predecessor/holder during
// handover, sec_tail by whichever holder last appended to the secondary
// queue. The alignment keeps the node's address out of {0, 1}, which the
// spin word overloading relies on.
struct alignas(64) CnaNode {
  std::atomic<CnaNode*> next{nullptr};
  std::atomic<uintptr_t> spin{0};
  CnaNode* sec_tail{nullptr};
  int socket{topology::kUnknownSocket};
};

// Compact NUMA-aware queue lock. Shared state is one word: the queue tail.
// Waiters form a main queue; at handover the holder prefers the first
// waiter on its own socket (with probability threshold/(threshold+1)) and
// parks the skipped remote waiters in a secondary queue threaded through
// the node spin words. The occasional failed draw flushes the secondary
// queue back in front of the main queue, which bounds unfairness.
class CnaLock {
 public:
  CnaLock() = default;
  CnaLock(const CnaLock&) = delete;
  CnaLock& operator=(const CnaLock&) = delete;

  void acquire(CnaNode& me) {
    me.next.store(nullptr, std::memory_order_relaxed);
    me.socket = topology::kUnknownSocket;
    me.spin.store(detail::kWaiting, std::memory_order_relaxed);
    stats::count_swap();
    CnaNode* prev = tail_.exchange(&me, std::memory_order_acq_rel);
    if (prev == nullptr) {
      // Uncontended: hold with an empty secondary queue. The socket is
      // deliberately not queried here; only waiters pay for it.
      me.spin.store(detail::kGrantedEmpty, std::memory_order_relaxed);
      return;
    }
    me.socket = topology::current_numa_node();
    prev->next.store(&me, std::memory_order_release);
    SpinWait sw;
    while (me.spin.load(std::memory_order_acquire) == detail::kWaiting) {
      sw.pause();
    }
  }

  void release(CnaNode& me, const FairnessPolicy& policy = default_policy()) {
    CnaNode* next = me.next.load(std::memory_order_acquire);
    if (next == nullptr) {
      const uintptr_t spin = me.spin.load(std::memory_order_relaxed);
      if (spin == detail::kGrantedEmpty) {
        CnaNode* expected = &me;
        stats::count_cas();
        if (tail_.compare_exchange_strong(expected, nullptr,
                                          std::memory_order_acq_rel,
                                          std::memory_order_acquire)) {
          return;
        }
      } else {
        // Main queue drained but remote waiters are parked: promote the
        // secondary queue to main by installing its tail as the lock tail.
        CnaNode* sec_head = detail::from_handle<CnaNode>(spin);
        CnaNode* expected = &me;
        stats::count_cas();
        if (tail_.compare_exchange_strong(expected, sec_head->sec_tail,
                                          std::memory_order_acq_rel,
                                          std::memory_order_acquire)) {
          stats::count_grant_store();
          sec_head->spin.store(detail::kGrantedEmpty,
                               std::memory_order_release);
          return;
        }
      }
      // Lost the race with a new arrival; wait for its link to appear.
      SpinWait sw;
      while ((next = me.next.load(std::memory_order_acquire)) == nullptr) {
        sw.pause();
      }
    }
    const auto grant = detail::choose_successor(&me, next, policy);
    stats::count_grant_store();
    grant.node->spin.store(grant.word, std::memory_order_release);
  }

  bool contended() const {
    return tail_.load(std::memory_order_acquire) != nullptr;
  }

 private:
  std::atomic<CnaNode*> tail_{nullptr};
};

static_assert(sizeof(CnaLock) == sizeof(void*),
              "shared lock state must stay a single machine word");

}  // namespace cna
