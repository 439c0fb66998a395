#include "cna/word_lock.hpp"

#include <atomic>
#include <bit>
#include <stdexcept>

#include "cna/detail/cna_queue.hpp"
#include "cna/relax.hpp"
#include "cna/stats.hpp"
#include "cna/thread_id.hpp"

namespace cna {
namespace {

std::atomic_ref<uint32_t> word_ref(LockWord32& lock) {
  return std::atomic_ref<uint32_t>(lock.raw);
}

// The lock byte is the least significant byte of the word.
std::atomic_ref<uint8_t> locked_byte(LockWord32& lock) {
  auto* bytes = reinterpret_cast<uint8_t*>(&lock.raw);
  constexpr size_t kOffset =
      std::endian::native == std::endian::little ? 0 : 3;
  return std::atomic_ref<uint8_t>(bytes[kOffset]);
}

// Locked + pending as one halfword; storing 1 claims the lock and clears
// pending in a single atomic store.
std::atomic_ref<uint16_t> locked_pending_half(LockWord32& lock) {
  auto* bytes = reinterpret_cast<uint8_t*>(&lock.raw);
  constexpr size_t kOffset =
      std::endian::native == std::endian::little ? 0 : 2;
  return std::atomic_ref<uint16_t>(
      *reinterpret_cast<uint16_t*>(bytes + kOffset));
}

// Registry mapping thread index -> that thread's node pool, so a tail code
// read from the word can be turned back into a node pointer. A pool is
// published before its owner's first tail exchange; the exchange makes it
// visible to whoever reads the code out of the word.
std::atomic<NodePool*> g_pools[kWordMaxCpu + 1];

NodePool& local_pool() {
  thread_local NodePool pool;
  return pool;
}

NodePool& registered_local_pool() {
  NodePool& pool = local_pool();
  const int idx = this_thread::index();
  if (idx < 0 || idx > kWordMaxCpu) {
    throw std::out_of_range("thread index not encodable in a lock word");
  }
  if (g_pools[idx].load(std::memory_order_relaxed) != &pool) {
    g_pools[idx].store(&pool, std::memory_order_release);
  }
  return pool;
}

WordQueueNode* node_for_code(uint16_t code) {
  const TailDecoded d = decode_tail(code);
  NodePool* pool = g_pools[d.cpu].load(std::memory_order_acquire);
  return &pool->nodes[d.ctx];
}

// Replaces the tail halfword, leaving the low bits alone. One logical
// exchange; contention with concurrent word updates retries.
uint16_t xchg_tail(LockWord32& lock, uint16_t code) {
  auto w = word_ref(lock);
  uint32_t old = w.load(std::memory_order_relaxed);
  for (;;) {
    const uint32_t desired =
        (old & ~kWordTailMask) | (static_cast<uint32_t>(code) << kWordTailShift);
    if (w.compare_exchange_weak(old, desired, std::memory_order_acq_rel,
                                std::memory_order_relaxed)) {
      return static_cast<uint16_t>(old >> kWordTailShift);
    }
  }
}

void slow_path_acquire(LockWord32& lock, NodePool& pool, int ctx,
                       SlowPath slow, const FairnessPolicy& policy) {
  WordQueueNode& node = pool.nodes[ctx];
  node.next.store(nullptr, std::memory_order_relaxed);
  node.spin.store(detail::kWaiting, std::memory_order_relaxed);
  node.sec_tail = nullptr;
  node.socket = topology::kUnknownSocket;
  const uint16_t my_code =
      encode_tail(this_thread::index(), ctx);
  node.tail_code = my_code;

  stats::count_swap();
  const uint16_t prev_code = xchg_tail(lock, my_code);
  if (prev_code != 0) {
    if (slow == SlowPath::kCna) {
      node.socket = topology::current_numa_node();
    }
    WordQueueNode* prev = node_for_code(prev_code);
    prev->next.store(&node, std::memory_order_release);
    SpinWait sw;
    while (node.spin.load(std::memory_order_acquire) == detail::kWaiting) {
      sw.pause();
    }
  } else {
    node.spin.store(detail::kGrantedEmpty, std::memory_order_relaxed);
  }

  // Queue head: the word's low bits must drain before the lock can be
  // claimed (a pending-bit waiter has priority over the queue).
  auto w = word_ref(lock);
  uint32_t cur;
  SpinWait sw;
  while (((cur = w.load(std::memory_order_acquire)) &
          (kWordLockedMask | kWordPendingBit)) != 0) {
    sw.pause();
  }

  const uint32_t my_tail_bits = static_cast<uint32_t>(my_code)
                                << kWordTailShift;
  const uintptr_t spin = node.spin.load(std::memory_order_relaxed);
  while ((cur & kWordTailMask) == my_tail_bits) {
    // I am the last queued waiter; claiming must also retire my tail code.
    uint32_t desired = kWordLockedVal;
    WordQueueNode* sec_head = nullptr;
    if (spin != detail::kGrantedEmpty) {
      // Remote waiters are parked: their tail becomes the new queue tail.
      sec_head = detail::from_handle<WordQueueNode>(spin);
      desired = (static_cast<uint32_t>(sec_head->sec_tail->tail_code)
                 << kWordTailShift) |
                kWordLockedVal;
    }
    stats::count_cas();
    if (w.compare_exchange_weak(cur, desired, std::memory_order_acq_rel,
                                std::memory_order_acquire)) {
      if (sec_head != nullptr) {
        stats::count_grant_store();
        sec_head->spin.store(detail::kGrantedEmpty,
                             std::memory_order_release);
      }
      return;
    }
    // Failed claim means the tail moved: a new waiter is linking behind me.
  }

  // Someone is queued behind me. Only the queue head may set the lock byte
  // while pending is clear, so a plain store claims it.
  locked_byte(lock).store(static_cast<uint8_t>(kWordLockedVal),
                          std::memory_order_release);
  WordQueueNode* next;
  SpinWait sw2;
  while ((next = node.next.load(std::memory_order_acquire)) == nullptr) {
    sw2.pause();
  }
  if (slow == SlowPath::kCna) {
    const auto grant = detail::choose_successor(&node, next, policy);
    stats::count_grant_store();
    grant.node->spin.store(grant.word, std::memory_order_release);
  } else {
    stats::count_grant_store();
    next->spin.store(detail::kGrantedEmpty, std::memory_order_release);
  }
}

}  // namespace

uint16_t encode_tail(int cpu, int ctx) {
  if (cpu < 0 || cpu > kWordMaxCpu) {
    throw std::out_of_range("tail encoding: cpu out of range");
  }
  if (ctx < 0 || ctx >= kWordMaxContexts) {
    throw std::out_of_range("tail encoding: ctx out of range");
  }
  return static_cast<uint16_t>(((cpu + 1) << 2) | ctx);
}

TailDecoded decode_tail(uint16_t code) {
  return TailDecoded{static_cast<int>(code >> 2) - 1,
                     static_cast<int>(code & 3u)};
}

void word_acquire(LockWord32& lock, SlowPath slow_path,
                  const FairnessPolicy& policy) {
  NodePool& pool = registered_local_pool();
  if (pool.depth >= NodePool::kMaxNesting) {
    throw std::logic_error("word lock nesting limit (4) exceeded");
  }
  const int ctx = pool.depth++;

  auto w = word_ref(lock);
  uint32_t v = 0;
  stats::count_cas();
  if (w.compare_exchange_strong(v, kWordLockedVal, std::memory_order_acquire,
                                std::memory_order_relaxed)) {
    return;
  }
  for (;;) {
    if (v == 0) {
      stats::count_cas();
      if (w.compare_exchange_weak(v, kWordLockedVal,
                                  std::memory_order_acquire,
                                  std::memory_order_relaxed)) {
        return;
      }
      continue;
    }
    if (v == kWordLockedVal) {
      // Held, nobody waiting: spin on the pending bit, no queue node needed.
      stats::count_cas();
      if (w.compare_exchange_weak(v, kWordLockedVal | kWordPendingBit,
                                  std::memory_order_acq_rel,
                                  std::memory_order_relaxed)) {
        SpinWait sw;
        while ((w.load(std::memory_order_acquire) & kWordLockedMask) != 0) {
          sw.pause();
        }
        locked_pending_half(lock).store(
            static_cast<uint16_t>(kWordLockedVal), std::memory_order_release);
        return;
      }
      continue;
    }
    break;
  }
  slow_path_acquire(lock, pool, ctx, slow_path, policy);
}

void word_release(LockWord32& lock) {
  NodePool& pool = local_pool();
  if (pool.depth <= 0) {
    throw std::logic_error("word lock released but not held by this thread");
  }
  locked_byte(lock).store(0, std::memory_order_release);
  --pool.depth;
}

int word_nesting_depth() { return local_pool().depth; }

uint32_t word_value(const LockWord32& lock) {
  return std::atomic_ref<const uint32_t>(lock.raw)
      .load(std::memory_order_acquire);
}

}  // namespace cna
