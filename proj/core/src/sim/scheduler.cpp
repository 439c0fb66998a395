#include <stdexcept>
#include <string>

#include "cna/prng.hpp"
#include "cna/sim/scheduler.hpp"

namespace cna::sim {

namespace {

// Deterministic uniform pick among enabled threads.
int pick_enabled(const Sim& sim, XorShift32& rng) {
  const int n = sim.enabled_count();
  if (n == 0) return kNull;
  int skip = static_cast<int>(rng.next() % static_cast<uint32_t>(n));
  for (int t = 0;; ++t) {
    if (sim.enabled(t) && skip-- == 0) return t;
  }
}

}  // namespace

ScheduleResult run_schedule(const SimConfig& config,
                            const std::vector<int>& schedule) {
  ScheduleResult result;
  Sim sim(config);
  for (size_t i = 0; i < schedule.size(); ++i) {
    const int t = schedule[i];
    if (t < 0 || t >= sim.config().threads) {
      result.error = "schedule[" + std::to_string(i) +
                     "]: thread index " + std::to_string(t) + " out of range";
      break;
    }
    if (!sim.enabled(t)) {
      result.error = "schedule[" + std::to_string(i) + "]: thread " +
                     std::to_string(t) + " is blocked or finished";
      break;
    }
    sim.step(t);
    ++result.steps;
  }
  result.trace = sim.trace();
  result.complete = sim.complete();
  return result;
}

RandomRunResult run_random(const SimConfig& config, uint32_t schedule_seed,
                           uint64_t max_steps) {
  RandomRunResult result;
  Sim sim(config);
  XorShift32 rng(schedule_seed);
  uint64_t steps = 0;
  while (!sim.complete()) {
    const int t = pick_enabled(sim, rng);
    if (t == kNull) {
      throw SimViolation("deadlock: no thread enabled before completion");
    }
    if (++steps > max_steps) {
      throw SimViolation("random run exceeded " + std::to_string(max_steps) +
                         " steps");
    }
    sim.step(t);
    result.schedule.push_back(t);
  }
  result.trace = sim.trace();
  return result;
}

namespace {

void enumerate_from(const Sim& sim, uint32_t depth, const SimConfig& config,
                    const std::function<void(const Sim&)>& on_complete,
                    EnumerateStats& stats) {
  if (sim.complete()) {
    if (sim.counter() != sim.target_acquisitions()) {
      throw SimViolation(
          "critical-section counter lost an update: " +
          std::to_string(sim.counter()) + " of " +
          std::to_string(sim.target_acquisitions()));
    }
    ++stats.schedules;
    if (stats.max_depth < depth) stats.max_depth = depth;
    if (on_complete) on_complete(sim);
    return;
  }
  if (depth >= config.depth_bound) {
    throw SimViolation("an interleaving ran past the depth bound");
  }
  bool any = false;
  for (int t = 0; t < config.threads; ++t) {
    if (!sim.enabled(t)) continue;
    any = true;
    Sim child = sim;  // fork the execution
    child.step(t);
    child.check_partition_if_quiescent();
    enumerate_from(child, depth + 1, config, on_complete, stats);
  }
  if (!any) {
    throw SimViolation("deadlock: no thread enabled before completion");
  }
}

}  // namespace

EnumerateStats enumerate_schedules(
    const SimConfig& config, const std::function<void(const Sim&)>& on_complete) {
  if (config.threads > 3) {
    throw std::invalid_argument(
        "exhaustive enumeration is limited to 3 threads");
  }
  if (config.depth_bound > 64) {
    throw std::invalid_argument("exhaustive depth bound is limited to 64");
  }
  EnumerateStats stats;
  Sim root(config);
  root.check_partition_if_quiescent();
  enumerate_from(root, 0, config, on_complete, stats);
  return stats;
}

SimSummary run_counting(SimConfig config, uint32_t schedule_seed,
                        uint64_t target_grants) {
  config.record_trace = false;
  config.check_invariants = false;
  Sim sim(config);
  XorShift32 rng(schedule_seed);
  while (!sim.complete() && sim.summary().total_grants < target_grants) {
    const int t = pick_enabled(sim, rng);
    if (t == kNull) {
      throw SimViolation("deadlock: no thread enabled before completion");
    }
    sim.step(t);
  }
  if (sim.summary().total_grants < target_grants) {
    throw std::invalid_argument(
        "acquisition counts ran out before the grant target");
  }
  return sim.summary();
}

}  // namespace cna::sim
