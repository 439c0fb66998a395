#pragma once

#include <cstdint>

namespace cna {

// Per-thread tallies of the atomic instructions and handover actions the
// locks execute. Counters are thread-confined (no shared-cache traffic on
// the hot path); harnesses aggregate them after joining their threads.
// The acquisition/release budget tests are built on these.
struct AtomicOpCounts {
  uint64_t swaps = 0;               // atomic exchanges (queue entry)
  uint64_t cas_attempts = 0;        // compare-and-swap attempts, success or not
  uint64_t plain_grant_stores = 0;  // handovers done with a plain store
  uint64_t find_successor_calls = 0;
  uint64_t shuffle_skips = 0;       // handovers short-circuited by shuffle reduction
  uint64_t handovers_empty_secondary = 0;  // releases that saw a successor and no secondary queue

  AtomicOpCounts& operator-=(const AtomicOpCounts& rhs) {
    swaps -= rhs.swaps;
    cas_attempts -= rhs.cas_attempts;
    plain_grant_stores -= rhs.plain_grant_stores;
    find_successor_calls -= rhs.find_successor_calls;
    shuffle_skips -= rhs.shuffle_skips;
    handovers_empty_secondary -= rhs.handovers_empty_secondary;
    return *this;
  }
  AtomicOpCounts& operator+=(const AtomicOpCounts& rhs) {
    swaps += rhs.swaps;
    cas_attempts += rhs.cas_attempts;
    plain_grant_stores += rhs.plain_grant_stores;
    find_successor_calls += rhs.find_successor_calls;
    shuffle_skips += rhs.shuffle_skips;
    handovers_empty_secondary += rhs.handovers_empty_secondary;
    return *this;
  }
  friend AtomicOpCounts operator-(AtomicOpCounts a, const AtomicOpCounts& b) { return a -= b; }
};

namespace stats {

inline thread_local AtomicOpCounts tl_counts;

inline AtomicOpCounts snapshot() { return tl_counts; }

inline void count_swap() { ++tl_counts.swaps; }
inline void count_cas() { ++tl_counts.cas_attempts; }
inline void count_grant_store() { ++tl_counts.plain_grant_stores; }

}  // namespace stats
}  // namespace cna
