#pragma once

#include <cstdint>

#include "cna/prng.hpp"
#include "cna/thread_id.hpp"

namespace cna {

// Tuning knobs for the lock handover policy. The defaults keep the lock on
// the current socket with probability 65535/65536 per handover; the shuffle
// reduction is off by default and skips the successor search with
// probability 255/256 when the secondary queue is empty.
struct FairnessPolicy {
  uint32_t threshold = 0xffffu;          // keep-local mask, 2^k - 1
  uint32_t shuffle_threshold = 0xffu;    // shuffle-reduction mask, 2^k - 1
  bool shuffle_reduction_enabled = false;
  uint32_t seed = 0x5eedu;
};

constexpr bool is_low_bit_mask(uint32_t v) { return (v & (v + 1)) == 0; }

// Throws std::invalid_argument on a malformed policy (masks must be 2^k - 1).
void validate(const FairnessPolicy& policy);

// Applies CNA_THRESHOLD / CNA_SHUFFLE_THRESHOLD / CNA_SEED overrides.
FairnessPolicy policy_from_env(FairnessPolicy base = {});

// Process-wide policy used when a release is not handed one explicitly.
// The CLI installs its configured policy here at startup.
FairnessPolicy& default_policy();

namespace detail {
struct ThreadDrawState {
  XorShift32 rng;
  uint32_t seeded_from = 0;
  bool initialized = false;
};
inline thread_local ThreadDrawState tl_draws;
}  // namespace detail

// Next fairness draw for the calling thread. Streams are per thread, derived
// from the policy seed and the thread index, and restart when the seed
// changes.
inline uint32_t fairness_draw(const FairnessPolicy& policy) {
  auto& st = detail::tl_draws;
  if (!st.initialized || st.seeded_from != policy.seed) {
    st.rng = XorShift32(mix_seed(policy.seed, static_cast<uint32_t>(this_thread::index())));
    st.seeded_from = policy.seed;
    st.initialized = true;
  }
  return st.rng.next();
}

inline bool keep_lock_local(const FairnessPolicy& policy) {
  return (fairness_draw(policy) & policy.threshold) != 0;
}

}  // namespace cna
