#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "cna/sim/sim.hpp"

namespace cna::sim {

struct ScheduleResult {
  SimTrace trace;
  bool complete = false;
  uint64_t steps = 0;
  std::string error;  // empty on success; deadlock / bad index / blocked
};

// Executes exactly the given interleaving. Deterministic: the same config
// and schedule always produce the identical trace. A schedule may stop
// short of completion; stepping a blocked or finished thread, or reaching a
// state with no enabled thread before completion, is reported in `error`.
ScheduleResult run_schedule(const SimConfig& config,
                            const std::vector<int>& schedule);

// Runs to completion picking uniformly among enabled threads, recording the
// schedule it chose. Throws SimViolation on deadlock or when max_steps is
// exceeded.
struct RandomRunResult {
  SimTrace trace;
  std::vector<int> schedule;
};
RandomRunResult run_random(const SimConfig& config, uint32_t schedule_seed,
                           uint64_t max_steps = 50'000'000);

// Depth-first enumeration of every complete interleaving within the depth
// bound. Requires exhaustive-mode limits (<= 3 threads, bound <= 64).
// Checks deadlock-freedom, mutual exclusion, the lost-update counter, the
// queue partition invariant at quiescent points, and the per-episode atomic
// budget on every path; throws SimViolation on the first failure. The
// callback sees each completed execution.
struct EnumerateStats {
  uint64_t schedules = 0;
  uint32_t max_depth = 0;
};
EnumerateStats enumerate_schedules(
    const SimConfig& config,
    const std::function<void(const Sim&)>& on_complete = {});

// Random-scheduler run that stops once `target_grants` grants happened
// (the configured acquisition counts must cover the target). Trace
// recording and quiescent checks are disabled; this is the deterministic
// bulk driver behind the fairness and locality measurements.
SimSummary run_counting(SimConfig config, uint32_t schedule_seed,
                        uint64_t target_grants);

}  // namespace cna::sim
