#pragma once

#include <memory>

#include "cna/lock_kind.hpp"
#include "cna/policy.hpp"

namespace cna {

// Uniform facade over all lock kinds so one harness can drive any of them.
// The context argument is the caller's dense thread index; callers must
// also have set this_thread::set_index to the same value (the word locks
// and the mock topology key off it).
class AnyLock {
 public:
  virtual ~AnyLock() = default;
  virtual void acquire(int thread) = 0;
  virtual void release(int thread) = 0;
};

// Builds a lock plus per-thread context for indices [0, max_threads).
// The policy's shuffle flag is forced by the kind: on for cna-opt, off for
// cna. Throws std::invalid_argument on a malformed policy.
std::unique_ptr<AnyLock> make_lock(LockKind kind, int max_threads,
                                   FairnessPolicy policy = {});

}  // namespace cna
