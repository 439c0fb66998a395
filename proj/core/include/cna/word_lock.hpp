#pragma once

#include <atomic>
#include <cstdint>

#include "cna/policy.hpp"
#include "cna/topology.hpp"

namespace cna {

// 32-bit lock word, qspinlock layout: bits 0-7 the lock value, bit 8 the
// pending bit, bits 9-15 reserved zero, bits 16-31 the encoded queue tail
// (0 = empty queue). The whole shared state of the lock is these 4 bytes;
// waiting happens in per-thread nodes reached through the tail encoding.
struct LockWord32 {
  uint32_t raw = 0;
};

static_assert(sizeof(LockWord32) == 4,
              "lock word must stay exactly 4 bytes");

inline constexpr uint32_t kWordLockedMask = 0xffu;
inline constexpr uint32_t kWordLockedVal = 1u;
inline constexpr uint32_t kWordPendingBit = 1u << 8;
inline constexpr uint32_t kWordTailShift = 16;
inline constexpr uint32_t kWordTailMask = 0xffffu << kWordTailShift;

// Highest encodable cpu index: (cpu + 1) << 2 must fit in 16 bits.
inline constexpr int kWordMaxCpu = 16382;
inline constexpr int kWordMaxContexts = 4;

// Tail encoding: ((cpu + 1) << 2) | ctx. Storing cpu + 1 keeps every valid
// encoding nonzero, so tail 0 can mean "empty". Throws std::out_of_range on
// cpu > 16382 or ctx > 3.
uint16_t encode_tail(int cpu, int ctx);

struct TailDecoded {
  int cpu;
  int ctx;
};

// Inverse of encode_tail. Precondition: code != 0.
TailDecoded decode_tail(uint16_t code);

// Queue node for the word lock's slow path; same protocol fields as the
// standalone lock's node, plus the node's own tail encoding so a holder can
// reinstall a promoted secondary queue's tail into the word.
struct alignas(64) WordQueueNode {
  std::atomic<WordQueueNode*> next{nullptr};
  std::atomic<uintptr_t> spin{0};
  WordQueueNode* sec_tail{nullptr};
  int socket{topology::kUnknownSocket};
  uint16_t tail_code{0};
};

// Exactly four statically reserved nodes per thread; index = nesting level
// at acquisition time. Depth covers every held word lock, fast path
// included, so the nesting limit is enforced uniformly.
struct NodePool {
  static constexpr int kMaxNesting = kWordMaxContexts;
  WordQueueNode nodes[kMaxNesting];
  int depth = 0;
};

enum class SlowPath { kMcs, kCna };

// Acquire: one CAS when the word is 0; the pending bit when only the lock
// value is set; otherwise the queued slow path (MCS or CNA discipline over
// the per-thread node pool). Throws std::logic_error when the calling
// thread already holds 4 word locks.
void word_acquire(LockWord32& lock, SlowPath slow_path,
                  const FairnessPolicy& policy = default_policy());

// Release: plain store of 0 to the lock byte. Queue nodes are not touched.
void word_release(LockWord32& lock);

// Current word-lock nesting depth of the calling thread.
int word_nesting_depth();

// Atomic read of the whole word (tests and diagnostics).
uint32_t word_value(const LockWord32& lock);

// A word lock bound to one slow-path discipline.
class WordLock {
 public:
  explicit WordLock(SlowPath slow_path) : slow_(slow_path) {}
  WordLock(const WordLock&) = delete;
  WordLock& operator=(const WordLock&) = delete;

  void acquire(const FairnessPolicy& policy = default_policy()) {
    word_acquire(word_, slow_, policy);
  }
  void release() { word_release(word_); }
  uint32_t value() const { return word_value(word_); }
  LockWord32& word() { return word_; }

 private:
  LockWord32 word_{};
  SlowPath slow_;
};

}  // namespace cna
