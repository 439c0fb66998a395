#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cna/lock_kind.hpp"
#include "cna/policy.hpp"
#include "cna/sim/draws.hpp"
#include "cna/sim/trace.hpp"

namespace cna::sim {

// Thrown when a run violates an invariant the stepper checks (mutual
// exclusion, queue partition, per-episode atomic budget, deadlock, bounds).
struct SimViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SimConfig {
  int threads = 2;
  std::vector<int> sockets;       // per thread; empty = all socket 0
  std::vector<int> acquisitions;  // per thread; empty = 1 each
  LockKind lock = LockKind::kCna;
  FairnessPolicy policy{};        // shuffle flag is forced by the lock kind
  DrawSource draws = DrawSource::seeded(FairnessPolicy{}.seed, 2);
  bool record_trace = true;       // also gates the oracle feed recording
  bool check_invariants = true;
  uint32_t depth_bound = 64;      // enumeration only
};

// Throws std::invalid_argument on malformed configs (sizes, negative
// sockets, a lock kind with no stepped model, word locks above 2 threads).
void validate(const SimConfig& config);

inline constexpr int kNull = -1;

// One queue node per thread, mirrored as plain values. The spin word uses
// the same overloading as the real locks with handles encoded as
// node index + 2, keeping them out of {0, 1}.
struct SimNode {
  int next = kNull;
  uint64_t spin = 0;
  int sec_tail = kNull;
  int socket = -1;
  bool linked = false;   // this episode's predecessor link is in place
  bool joined = false;   // reachable from the queue head; oracle arrival fed
  int swap_child = kNull;  // node that swapped in directly behind this one
};

inline uint64_t handle_of(int node) { return static_cast<uint64_t>(node) + 2; }
inline int node_of_handle(uint64_t h) { return static_cast<int>(h) - 2; }

enum class Pc : uint8_t {
  kArrive,
  kLink,
  kSpinWait,
  kCsLoad,
  kCsStore,
  kRelease,
  kReleaseWaitLink,
  kReleaseStores,
  // word-lock machine (fast and pending paths, coarse)
  kWordTry,
  kWordPendWait,
  kWordPendClaim,
  kWordRelease,
  kDone,
};

struct PendingStore {
  enum class Kind : uint8_t { kSetNext, kSetSecTail, kGrant } kind;
  int16_t node;
  uint64_t value;
};

struct ThreadState {
  Pc pc = Pc::kArrive;
  int episodes_left = 0;
  int prev = kNull;
  uint64_t cs_load = 0;
  std::array<PendingStore, 4> stores{};
  uint8_t store_count = 0;
  uint8_t store_pos = 0;
  uint8_t episode_swaps = 0;
  uint8_t episode_cas = 0;
};

// Events fed to the sequential reference model: arrivals in the order nodes
// become reachable from the queue head, releases at the handover decision.
struct OracleEvent {
  bool is_release;
  int16_t thread;
};

struct SimSummary {
  std::vector<uint64_t> grants_per_thread;
  uint64_t total_grants = 0;
  uint64_t handovers = 0;
  uint64_t intra_socket_handovers = 0;
  uint64_t releases_with_successor = 0;
  uint64_t find_successor_calls = 0;
  uint64_t shuffle_skips = 0;
  // FIFO replay of the arrival order, accumulated online: socket-adjacency
  // of consecutive arrivals, which is what a strict-FIFO lock's handover
  // locality would be on the same sequence.
  uint64_t arrival_pairs = 0;
  uint64_t arrival_same_socket_pairs = 0;
  int last_arrival_socket = -1;
};

// Deterministic stepped execution of one lock protocol. Each step is one
// shared-memory action of one thread (an atomic read-modify-write, a
// protocol-field store, or the final read of a wait loop, which is enabled
// only once it would succeed). Local computation rides along with the step
// that triggers it. Fully value-semantic: copies fork the execution.
class Sim {
 public:
  explicit Sim(SimConfig config);

  bool enabled(int thread) const;
  int enabled_count() const;
  void step(int thread);  // precondition: enabled(thread)
  bool complete() const;

  int holder() const { return holder_; }
  uint64_t counter() const { return counter_; }
  uint32_t steps_taken() const { return steps_; }
  const SimConfig& config() const { return config_; }
  const SimTrace& trace() const { return trace_; }
  const SimSummary& summary() const { return summary_; }
  const std::vector<int>& grant_order() const { return grant_order_; }
  const std::vector<OracleEvent>& oracle_feed() const { return feed_; }
  const SimNode& node(int thread) const { return nodes_[thread]; }
  Pc thread_pc(int thread) const { return threads_[thread].pc; }

  // Queue partition and quiescent-state checks; no-op while a handover is
  // mid-flight. Throws SimViolation.
  void check_partition_if_quiescent() const;

  // Total acquisitions the config asks for (completion target).
  uint64_t target_acquisitions() const { return target_acquisitions_; }

 private:
  void step_queue_lock(int t);
  void step_word_lock(int t);
  void begin_handover(int t);
  int scan_for_same_socket(int t);
  void apply_pending_store(int t);
  void become_holder(int t, bool handover);
  void finish_episode(int t);
  void emit(Ev ev, int thread, bool handover = false);
  void feed_arrival(int t);
  void feed_release(int t);
  void cascade_joins(int start);
  uint32_t draw(int t);

  SimConfig config_;
  DrawSource draws_ = DrawSource::seeded(FairnessPolicy{}.seed, 2);
  bool cna_ = true;
  bool word_ = false;
  std::vector<SimNode> nodes_;
  std::vector<ThreadState> threads_;
  int tail_ = kNull;
  uint32_t word_state_ = 0;
  int holder_ = kNull;
  int cs_inside_ = 0;
  uint64_t counter_ = 0;
  uint32_t steps_ = 0;
  int last_release_socket_ = -1;
  uint64_t done_threads_ = 0;
  uint64_t target_acquisitions_ = 0;
  uint64_t completed_acquisitions_ = 0;
  SimTrace trace_;
  SimSummary summary_;
  std::vector<int> grant_order_;
  std::vector<OracleEvent> feed_;
};

}  // namespace cna::sim
