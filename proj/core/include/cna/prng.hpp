#pragma once

#include <cstdint>

namespace cna {

// 32-bit xorshift generator. Branch-free, a handful of cycles per draw,
// period 2^32 - 1 over the nonzero states. Used for the lock handover
// fairness draws and for benchmark workloads; everything that draws from it
// is reproducible from the seed.
class XorShift32 {
 public:
  XorShift32() = default;
  explicit XorShift32(uint32_t seed) : state_(seed ? seed : kFallbackSeed) {}

  uint32_t next() {
    uint32_t x = state_;
    x ^= x << 13;
    x ^= x >> 17;
    x ^= x << 5;
    state_ = x;
    return x;
  }

  uint32_t state() const { return state_; }

 private:
  // A zero state would be a fixed point; remap it.
  static constexpr uint32_t kFallbackSeed = 0x9e3779b9u;
  uint32_t state_ = kFallbackSeed;
};

// Mixes a thread index into a global seed so per-thread streams differ even
// for adjacent indices.
inline uint32_t mix_seed(uint32_t seed, uint32_t thread_index) {
  uint32_t h = seed ^ (thread_index + 0x9e3779b9u + (seed << 6) + (seed >> 2));
  return h ? h : 0x9e3779b9u;
}

}  // namespace cna
