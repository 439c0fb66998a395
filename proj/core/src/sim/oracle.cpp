#include <string>

#include "cna/sim/oracle.hpp"

namespace cna::sim {

TwoQueueOracle::TwoQueueOracle(const FairnessPolicy& policy, DrawSource draws,
                               bool cna)
    : policy_(policy), draws_(std::move(draws)), cna_(cna) {}

void TwoQueueOracle::grant(OracleEntry who) {
  held_ = true;
  holder_ = who;
  grants_.push_back(who.thread);
}

void TwoQueueOracle::arrive(int thread, int socket) {
  if (!held_) {
    grant(OracleEntry{thread, socket});
    return;
  }
  main_.push_back(OracleEntry{thread, socket});
}

std::optional<int> TwoQueueOracle::release() {
  if (!held_) {
    throw std::logic_error("released a lock the model does not hold");
  }
  if (main_.empty()) {
    if (secondary_.empty()) {
      held_ = false;
      holder_ = OracleEntry{kNull, -1};
      return std::nullopt;
    }
    // Drained main queue: the secondary takes over wholesale, no draw.
    OracleEntry next = secondary_.front();
    secondary_.pop_front();
    while (!secondary_.empty()) {
      main_.push_back(secondary_.front());
      secondary_.pop_front();
    }
    grant(next);
    return next.thread;
  }
  if (!cna_) {
    OracleEntry next = main_.front();
    main_.pop_front();
    grant(next);
    return next.thread;
  }
  // Draw parity with the stepped lock: the shuffle draw happens only while
  // the secondary queue is empty, the keep draw on every handover past it.
  if (policy_.shuffle_reduction_enabled && secondary_.empty() &&
      (draws_.next_for(holder_.thread) & policy_.shuffle_threshold) != 0) {
    OracleEntry next = main_.front();
    main_.pop_front();
    grant(next);
    return next.thread;
  }
  const bool keep =
      (draws_.next_for(holder_.thread) & policy_.threshold) != 0;
  if (keep) {
    for (size_t i = 0; i < main_.size(); ++i) {
      if (main_[i].socket != holder_.socket) continue;
      for (size_t j = 0; j < i; ++j) {
        secondary_.push_back(main_.front());
        main_.pop_front();
      }
      OracleEntry next = main_.front();
      main_.pop_front();
      grant(next);
      return next.thread;
    }
    // No waiter shares the holder's socket; nothing moves.
  }
  if (!secondary_.empty()) {
    // Flush: the secondary queue returns to the front, oldest first.
    while (!secondary_.empty()) {
      main_.push_front(secondary_.back());
      secondary_.pop_back();
    }
  }
  OracleEntry next = main_.front();
  main_.pop_front();
  grant(next);
  return next.thread;
}

std::vector<int> oracle_grant_order(const std::vector<OracleEntry>& arrivals,
                                    const FairnessPolicy& policy,
                                    DrawSource draws, bool cna) {
  TwoQueueOracle oracle(policy, std::move(draws), cna);
  for (const OracleEntry& a : arrivals) {
    oracle.arrive(a.thread, a.socket);
  }
  while (oracle.held()) {
    oracle.release();
  }
  return oracle.grants();
}

namespace {

std::string join_order(const std::vector<int>& order) {
  std::string s;
  for (size_t i = 0; i < order.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(order[i]);
  }
  return s;
}

}  // namespace

void verify_against_oracle(const Sim& sim) {
  const SimConfig& config = sim.config();
  if (!config.record_trace) {
    throw std::invalid_argument(
        "oracle verification needs a recorded event feed");
  }
  const bool cna =
      config.lock == LockKind::kCna || config.lock == LockKind::kCnaOpt;
  TwoQueueOracle oracle(config.policy, config.draws, cna);
  for (const OracleEvent& e : sim.oracle_feed()) {
    if (e.is_release) {
      oracle.release();
    } else {
      oracle.arrive(e.thread, config.sockets[e.thread]);
    }
  }
  if (oracle.grants() != sim.grant_order()) {
    throw SimViolation("grant order diverged from the reference model: run [" +
                       join_order(sim.grant_order()) + "] vs model [" +
                       join_order(oracle.grants()) + "]");
  }
}

}  // namespace cna::sim
