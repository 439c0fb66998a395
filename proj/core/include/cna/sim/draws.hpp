#pragma once

#include <cstdint>
#include <vector>

#include "cna/prng.hpp"

namespace cna::sim {

// Where fairness draws come from during simulation. Either a scripted
// sequence consumed through one global cursor (cyclic, so a one-element
// script pins every draw), or per-thread generator streams mirroring what
// the concurrent lock would draw. Value semantics: a copy replays
// independently from the same point.
class DrawSource {
 public:
  static DrawSource scripted(std::vector<uint32_t> values);
  static DrawSource seeded(uint32_t seed, int threads);

  uint32_t next_for(int thread);
  bool is_scripted() const { return scripted_; }

  // Appends pristine per-thread streams up to `threads`; consumed streams
  // keep their position. No effect on scripted sources.
  void ensure_threads(int threads);

 private:
  DrawSource() = default;
  bool scripted_ = false;
  uint32_t seed_ = 0;
  std::vector<uint32_t> script_;
  size_t cursor_ = 0;
  std::vector<XorShift32> streams_;
};

}  // namespace cna::sim
