#include "cna/sim/sim.hpp"

namespace cna::sim {

namespace {
constexpr uint32_t kWordLockedByte = 0xffu;
constexpr uint32_t kWordPending = 0x100u;
}  // namespace

void Sim::step(int t) {
  if (!enabled(t)) {
    throw SimViolation("stepped thread " + std::to_string(t) +
                       " while it is blocked or finished");
  }
  if (word_) {
    step_word_lock(t);
  } else {
    step_queue_lock(t);
  }
  ++steps_;
}

void Sim::step_queue_lock(int t) {
  ThreadState& th = threads_[t];
  SimNode& me = nodes_[t];
  switch (th.pc) {
    case Pc::kArrive: {
      me = SimNode{};
      me.socket = config_.sockets[t];
      th.episode_swaps = 1;  // the tail exchange below
      th.episode_cas = 0;
      th.store_count = th.store_pos = 0;
      th.prev = tail_;
      tail_ = t;
      emit(Ev::kEnqueue, t);
      if (th.prev == kNull) {
        if (config_.check_invariants && holder_ != kNull) {
          throw SimViolation("tail was empty while the lock was held");
        }
        me.joined = true;
        feed_arrival(t);
        me.spin = 1;
        become_holder(t, false);
        th.pc = Pc::kCsLoad;
      } else {
        nodes_[th.prev].swap_child = t;
        th.pc = Pc::kLink;
      }
      break;
    }
    case Pc::kLink: {
      nodes_[th.prev].next = t;
      me.linked = true;
      cascade_joins(t);
      th.pc = Pc::kSpinWait;
      break;
    }
    case Pc::kSpinWait: {
      // enabled() admits this step only once the grant store landed
      th.pc = Pc::kCsLoad;
      break;
    }
    case Pc::kCsLoad: {
      if (holder_ != t) {
        throw SimViolation("thread in the critical section is not the holder");
      }
      if (++cs_inside_ != 1) {
        throw SimViolation("mutual exclusion violated");
      }
      th.cs_load = counter_;
      th.pc = Pc::kCsStore;
      break;
    }
    case Pc::kCsStore: {
      counter_ = th.cs_load + 1;
      --cs_inside_;
      th.pc = Pc::kRelease;
      break;
    }
    case Pc::kRelease: {
      if (me.next == kNull) {
        ++th.episode_cas;
        if (tail_ == t) {
          feed_release(t);
          emit(Ev::kRelease, t);
          last_release_socket_ = me.socket;
          holder_ = kNull;
          if (me.spin == 1) {
            tail_ = kNull;
            finish_episode(t);
          } else {
            // Secondary waiters exist: retire the tail to the secondary's
            // last node and wake its head with one more store.
            const int sec_head = node_of_handle(me.spin);
            tail_ = nodes_[sec_head].sec_tail;
            th.stores[0] =
                PendingStore{PendingStore::Kind::kGrant,
                             static_cast<int16_t>(sec_head), 1};
            th.store_count = 1;
            th.store_pos = 0;
            th.pc = Pc::kReleaseStores;
          }
        } else {
          th.pc = Pc::kReleaseWaitLink;
        }
      } else {
        begin_handover(t);
      }
      break;
    }
    case Pc::kReleaseWaitLink: {
      // enabled() admits this step only once the successor's link landed
      begin_handover(t);
      break;
    }
    case Pc::kReleaseStores: {
      apply_pending_store(t);
      break;
    }
    default:
      throw SimViolation("queue-lock thread in a word-lock state");
  }
}

// The handover decision. Runs when the releasing holder knows its successor;
// picks who runs next, queues the stores that publish the choice, and applies
// the first one as this step's shared action.
void Sim::begin_handover(int t) {
  ThreadState& th = threads_[t];
  SimNode& me = nodes_[t];
  ++summary_.releases_with_successor;
  feed_release(t);
  emit(Ev::kRelease, t);
  last_release_socket_ = me.socket;
  holder_ = kNull;
  const int next = me.next;
  th.store_count = 0;
  th.store_pos = 0;
  auto push = [&](PendingStore::Kind kind, int node, uint64_t value) {
    th.stores[th.store_count++] =
        PendingStore{kind, static_cast<int16_t>(node), value};
  };

  if (!cna_) {
    push(PendingStore::Kind::kGrant, next, 1);
    th.pc = Pc::kReleaseStores;
    apply_pending_store(t);
    return;
  }

  bool decided = false;
  if (config_.policy.shuffle_reduction_enabled && me.spin == 1 &&
      (draw(t) & config_.policy.shuffle_threshold) != 0) {
    ++summary_.shuffle_skips;
    push(PendingStore::Kind::kGrant, next, 1);
    decided = true;
  }
  if (!decided) {
    const bool keep = (draw(t) & config_.policy.threshold) != 0;
    if (!keep) emit(Ev::kFlushDraw, t);
    int succ = kNull;
    if (keep) succ = scan_for_same_socket(t);
    if (succ != kNull) {
      push(PendingStore::Kind::kGrant, succ, me.spin);
    } else if (me.spin > 1) {
      // Flush: splice the whole secondary queue back in front of the
      // successor, then wake the spliced head.
      emit(Ev::kSpliceSecondary, t);
      const int sec_head = node_of_handle(me.spin);
      push(PendingStore::Kind::kSetNext, nodes_[sec_head].sec_tail,
           static_cast<uint64_t>(next));
      push(PendingStore::Kind::kGrant, sec_head, 1);
    } else {
      push(PendingStore::Kind::kGrant, next, 1);
    }
  }
  th.pc = Pc::kReleaseStores;
  apply_pending_store(t);
}

// Walks the waiting chain for the first node on the releasing holder's
// socket. On a hit past the first node the skipped prefix moves to the
// secondary queue (stores queued by the caller's pending list); a miss
// leaves both queues untouched. The chain only ever grows at its far end,
// so reading it in one step observes a state some real scan could have.
int Sim::scan_for_same_socket(int t) {
  ThreadState& th = threads_[t];
  SimNode& me = nodes_[t];
  ++summary_.find_successor_calls;
  const int my_socket = me.socket;
  const int first = me.next;
  if (nodes_[first].socket == my_socket) {
    return first;
  }
  int prev_cur = first;
  int cur = nodes_[first].next;
  while (cur != kNull && nodes_[cur].socket != my_socket) {
    prev_cur = cur;
    cur = nodes_[cur].next;
  }
  if (cur == kNull) {
    return kNull;
  }
  const int seg_head = first;
  const int seg_tail = prev_cur;
  auto push = [&](PendingStore::Kind kind, int node, uint64_t value) {
    th.stores[th.store_count++] =
        PendingStore{kind, static_cast<int16_t>(node), value};
  };
  if (me.spin > 1) {
    push(PendingStore::Kind::kSetNext,
         nodes_[node_of_handle(me.spin)].sec_tail,
         static_cast<uint64_t>(seg_head));
  } else {
    me.spin = handle_of(seg_head);  // holder-private field, free action
  }
  push(PendingStore::Kind::kSetNext, seg_tail, static_cast<uint64_t>(kNull));
  push(PendingStore::Kind::kSetSecTail, node_of_handle(me.spin),
       static_cast<uint64_t>(seg_tail));
  for (int n = seg_head;; n = nodes_[n].next) {
    emit(Ev::kMoveToSecondary, n);
    if (n == seg_tail) break;
  }
  return cur;
}

void Sim::apply_pending_store(int t) {
  ThreadState& th = threads_[t];
  const PendingStore& s = th.stores[th.store_pos++];
  switch (s.kind) {
    case PendingStore::Kind::kSetNext:
      nodes_[s.node].next = static_cast<int>(static_cast<int64_t>(s.value));
      break;
    case PendingStore::Kind::kSetSecTail:
      nodes_[s.node].sec_tail = static_cast<int>(static_cast<int64_t>(s.value));
      break;
    case PendingStore::Kind::kGrant:
      nodes_[s.node].spin = s.value;
      become_holder(s.node, true);
      break;
  }
  if (th.store_pos == th.store_count) {
    finish_episode(t);  // the grant is always the last queued store
  }
}

void Sim::step_word_lock(int t) {
  ThreadState& th = threads_[t];
  switch (th.pc) {
    case Pc::kWordTry: {
      th.episode_swaps = 0;
      th.episode_cas = 1;
      th.store_count = th.store_pos = 0;
      emit(Ev::kEnqueue, t);
      feed_arrival(t);
      if (word_state_ == 0) {
        word_state_ = 1;
        become_holder(t, false);
        th.pc = Pc::kCsLoad;
      } else {
        word_state_ |= kWordPending;
        th.pc = Pc::kWordPendWait;
      }
      break;
    }
    case Pc::kWordPendWait: {
      // enabled() admits this step only once the locked byte cleared
      th.pc = Pc::kWordPendClaim;
      break;
    }
    case Pc::kWordPendClaim: {
      word_state_ = 1;  // claims the lock and clears pending in one store
      become_holder(t, true);
      th.pc = Pc::kCsLoad;
      break;
    }
    case Pc::kCsLoad: {
      if (holder_ != t) {
        throw SimViolation("thread in the critical section is not the holder");
      }
      if (++cs_inside_ != 1) {
        throw SimViolation("mutual exclusion violated");
      }
      th.cs_load = counter_;
      th.pc = Pc::kCsStore;
      break;
    }
    case Pc::kCsStore: {
      counter_ = th.cs_load + 1;
      --cs_inside_;
      th.pc = Pc::kWordRelease;
      break;
    }
    case Pc::kWordRelease: {
      feed_release(t);
      emit(Ev::kRelease, t);
      last_release_socket_ = config_.sockets[t];
      holder_ = kNull;
      word_state_ &= ~kWordLockedByte;
      finish_episode(t);
      break;
    }
    default:
      throw SimViolation("word-lock thread in a queue-lock state");
  }
}

}  // namespace cna::sim
