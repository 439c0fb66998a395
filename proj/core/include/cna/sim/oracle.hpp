#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "cna/policy.hpp"
#include "cna/sim/draws.hpp"
#include "cna/sim/sim.hpp"

namespace cna::sim {

struct OracleEntry {
  int thread;
  int socket;
};

// Sequential reference model of the two-queue handover discipline: a main
// queue every arrival joins, a secondary queue holding remote waiters that
// a keep-local holder skipped, flushed to the front of the main queue when
// a draw fails or when the main queue drains. With cna=false it degrades to
// strict FIFO (the queue-lock baseline).
class TwoQueueOracle {
 public:
  TwoQueueOracle(const FairnessPolicy& policy, DrawSource draws,
                 bool cna = true);

  // Grants immediately when the lock is free and no one waits.
  void arrive(int thread, int socket);

  // One handover decision; returns the granted thread, or nullopt when the
  // lock goes free. Precondition: the lock is held.
  std::optional<int> release();

  bool held() const { return held_; }
  int holder_thread() const { return holder_.thread; }
  const std::vector<int>& grants() const { return grants_; }
  const std::deque<OracleEntry>& main_queue() const { return main_; }
  const std::deque<OracleEntry>& secondary_queue() const { return secondary_; }

 private:
  void grant(OracleEntry who);

  FairnessPolicy policy_;
  DrawSource draws_;
  bool cna_;
  bool held_ = false;
  OracleEntry holder_{kNull, -1};
  std::deque<OracleEntry> main_;
  std::deque<OracleEntry> secondary_;
  std::vector<int> grants_;
};

// All arrivals in order, then releases until the lock drains; returns the
// grant order.
std::vector<int> oracle_grant_order(const std::vector<OracleEntry>& arrivals,
                                    const FairnessPolicy& policy,
                                    DrawSource draws, bool cna = true);

// Replays a finished simulation's arrival/release feed through the oracle
// and compares grant orders. Throws SimViolation on mismatch.
void verify_against_oracle(const Sim& sim);

}  // namespace cna::sim
