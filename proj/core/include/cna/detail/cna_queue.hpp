#pragma once

#include <atomic>
#include <cstdint>

#include "cna/policy.hpp"
#include "cna/stats.hpp"

// Handover discipline shared by the standalone lock and the 32-bit word
// lock's slow path. A node type plugged in here needs the protocol fields
// {next, spin, sec_tail, socket} and a numeric identity outside {0, 1}.

namespace cna::detail {

// Grant-word states: 0 = still waiting; 1 = granted, secondary queue empty;
// any other value = granted, and the value names the secondary-queue head.
inline constexpr uintptr_t kWaiting = 0;
inline constexpr uintptr_t kGrantedEmpty = 1;

template <class Node>
uintptr_t to_handle(Node* n) {
  return reinterpret_cast<uintptr_t>(n);
}

template <class Node>
Node* from_handle(uintptr_t h) {
  return reinterpret_cast<Node*>(h);
}

// Scans the main queue for the first waiter on the holder's socket. A hit
// past the immediate successor moves the skipped run of remote waiters to
// the back of the secondary queue; a miss leaves both queues untouched and
// returns null. The moved run keeps its internal links; only its tail is
// cut. Stale sec_tail values in spliced-out heads are never cleaned up --
// they are unreachable until overwritten.
template <class Node>
Node* find_successor(Node* me) {
  ++stats::tl_counts.find_successor_calls;
  Node* next = me->next.load(std::memory_order_acquire);
  const int my_socket = me->socket;
  if (next->socket == my_socket) return next;

  Node* seg_head = next;
  Node* seg_tail = next;
  Node* cur = next->next.load(std::memory_order_acquire);
  while (cur != nullptr) {
    if (cur->socket == my_socket) {
      const uintptr_t spin = me->spin.load(std::memory_order_relaxed);
      if (spin > kGrantedEmpty) {
        from_handle<Node>(spin)->sec_tail->next.store(
            seg_head, std::memory_order_release);
      } else {
        me->spin.store(to_handle(seg_head), std::memory_order_relaxed);
      }
      seg_tail->next.store(nullptr, std::memory_order_release);
      from_handle<Node>(me->spin.load(std::memory_order_relaxed))->sec_tail =
          seg_tail;
      return cur;
    }
    seg_tail = cur;
    cur = cur->next.load(std::memory_order_acquire);
  }
  return nullptr;
}

template <class Node>
struct Grant {
  Node* node;
  uintptr_t word;
};

// Picks who takes over at a handover with a linked successor. Exactly one
// fairness draw is consumed, plus one earlier shuffle draw when the shuffle
// reduction applies (secondary queue empty). The returned word is what the
// caller must store into node->spin, with release semantics.
template <class Node>
Grant<Node> choose_successor(Node* me, Node* next,
                             const FairnessPolicy& policy) {
  if (me->spin.load(std::memory_order_relaxed) == kGrantedEmpty) {
    ++stats::tl_counts.handovers_empty_secondary;
    if (policy.shuffle_reduction_enabled &&
        (fairness_draw(policy) & policy.shuffle_threshold) != 0) {
      ++stats::tl_counts.shuffle_skips;
      return {next, kGrantedEmpty};
    }
  }
  Node* succ = nullptr;
  if (keep_lock_local(policy) && (succ = find_successor(me)) != nullptr) {
    return {succ, me->spin.load(std::memory_order_relaxed)};
  }
  const uintptr_t spin = me->spin.load(std::memory_order_relaxed);
  if (spin > kGrantedEmpty) {
    // Flush: the whole secondary queue goes in front of the main successor.
    Node* sec_head = from_handle<Node>(spin);
    sec_head->sec_tail->next.store(next, std::memory_order_release);
    return {sec_head, kGrantedEmpty};
  }
  return {next, kGrantedEmpty};
}

}  // namespace cna::detail
