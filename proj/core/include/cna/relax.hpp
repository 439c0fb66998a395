#pragma once

#include <thread>

namespace cna {

inline void cpu_relax() {
#if defined(__x86_64__) || defined(__i386__)
  asm volatile("pause" ::: "memory");
#elif defined(__aarch64__)
  asm volatile("yield" ::: "memory");
#else
  asm volatile("" ::: "memory");
#endif
}

// Busy-wait helper. Spins with a relax hint for a short burst, then starts
// yielding the CPU so that waiting makes progress on oversubscribed machines
// (the lock holder may not be running). Never parks.
class SpinWait {
 public:
  void pause() {
    if (++spins_ < kYieldAfter) {
      cpu_relax();
    } else {
      std::this_thread::yield();
    }
  }

  void reset() { spins_ = 0; }

 private:
  static constexpr int kYieldAfter = 256;
  int spins_ = 0;
};

}  // namespace cna
