#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <memory>
#include <thread>
#include <vector>

#include "cna/cna_lock.hpp"
#include "cna/locks.hpp"
#include "cna/mcs_lock.hpp"
#include "cna/stats.hpp"
#include "cna/tas_lock.hpp"
#include "cna/thread_id.hpp"
#include "cna/topology.hpp"
#include "cna/word_lock.hpp"

namespace {

// Shared-counter stress through the uniform facade.
uint64_t hammer(cna::LockKind kind, int threads, uint64_t per_thread,
                cna::FairnessPolicy policy = {}) {
  auto lock = cna::make_lock(kind, threads, policy);
  uint64_t counter = 0;
  std::vector<std::thread> workers;
  for (int i = 0; i < threads; ++i) {
    workers.emplace_back([&, i] {
      cna::this_thread::set_index(i);
      for (uint64_t k = 0; k < per_thread; ++k) {
        lock->acquire(i);
        ++counter;
        lock->release(i);
      }
    });
  }
  for (auto& w : workers) w.join();
  return counter;
}

}  // namespace

TEST_CASE("every lock kind preserves a plain counter under contention") {
  const int threads = 4;
  const uint64_t per_thread = 5000;
  for (const std::string& name : cna::lock_kind_names()) {
    CAPTURE(name);
    const auto kind = cna::parse_lock_kind(name);
    REQUIRE(kind.has_value());
    CHECK(hammer(*kind, threads, per_thread) == threads * per_thread);
  }
}

TEST_CASE("lock kind names round-trip") {
  CHECK(!cna::parse_lock_kind("bogus").has_value());
  for (const std::string& name : cna::lock_kind_names()) {
    auto kind = cna::parse_lock_kind(name);
    REQUIRE(kind.has_value());
    CHECK(cna::lock_kind_name(*kind) == name);
  }
}

TEST_CASE("shared lock state is one word") {
  static_assert(sizeof(cna::CnaLock) == sizeof(void*));
  static_assert(sizeof(cna::McsLock) == sizeof(void*));
  static_assert(sizeof(cna::LockWord32) == 4);
  CHECK(sizeof(cna::CnaLock) == sizeof(void*));
}

TEST_CASE("uncontended lock cycle never queries the topology") {
  cna::topology::use_mock({{0, 1}});
  cna::this_thread::set_index(0);
  (void)cna::topology::current_numa_node();  // prime the cache
  const uint64_t before = cna::topology::raw_queries_this_thread();
  cna::CnaLock lock;
  cna::CnaNode node;
  for (int i = 0; i < 64; ++i) {
    lock.acquire(node);
    lock.release(node);
  }
  CHECK(cna::topology::raw_queries_this_thread() == before);
  CHECK(node.socket == cna::topology::kUnknownSocket);
  cna::topology::use_real();
}

TEST_CASE("atomic budget: one exchange per acquire, at most one cas per release") {
  const int threads = 4;
  const uint64_t per_thread = 4000;
  auto lock = cna::make_lock(cna::LockKind::kCna, threads);
  std::vector<cna::AtomicOpCounts> deltas(threads);
  std::vector<std::thread> workers;
  for (int i = 0; i < threads; ++i) {
    workers.emplace_back([&, i] {
      cna::this_thread::set_index(i);
      const auto before = cna::stats::snapshot();
      for (uint64_t k = 0; k < per_thread; ++k) {
        lock->acquire(i);
        lock->release(i);
      }
      deltas[i] = cna::stats::snapshot() - before;
    });
  }
  for (auto& w : workers) w.join();
  for (int i = 0; i < threads; ++i) {
    CAPTURE(i);
    CHECK(deltas[i].swaps == per_thread);
    CHECK(deltas[i].cas_attempts <= per_thread);
  }
}

namespace {

// Hand-built waiting chains for the successor-scan unit tests. The nodes
// never spin; only the protocol fields matter.
struct Chain {
  cna::CnaNode holder;
  std::vector<std::unique_ptr<cna::CnaNode>> waiters;

  cna::CnaNode* add(int socket) {
    auto node = std::make_unique<cna::CnaNode>();
    node->socket = socket;
    node->spin.store(cna::detail::kWaiting, std::memory_order_relaxed);
    cna::CnaNode* raw = node.get();
    cna::CnaNode* prev =
        waiters.empty() ? &holder : waiters.back().get();
    prev->next.store(raw, std::memory_order_relaxed);
    waiters.push_back(std::move(node));
    return raw;
  }
};

}  // namespace

TEST_CASE("successor scan: immediate same-socket hit mutates nothing") {
  Chain c;
  c.holder.socket = 0;
  c.holder.spin.store(cna::detail::kGrantedEmpty, std::memory_order_relaxed);
  cna::CnaNode* w0 = c.add(0);
  c.add(1);
  CHECK(cna::detail::find_successor(&c.holder) == w0);
  CHECK(c.holder.spin.load() == cna::detail::kGrantedEmpty);
}

TEST_CASE("successor scan: skipped remote run becomes the secondary queue") {
  Chain c;
  c.holder.socket = 0;
  c.holder.spin.store(cna::detail::kGrantedEmpty, std::memory_order_relaxed);
  cna::CnaNode* r0 = c.add(1);
  cna::CnaNode* r1 = c.add(1);
  cna::CnaNode* mine = c.add(0);
  cna::CnaNode* behind = c.add(1);
  CHECK(cna::detail::find_successor(&c.holder) == mine);
  const uintptr_t spin = c.holder.spin.load();
  CHECK(spin == cna::detail::to_handle(r0));
  CHECK(r0->sec_tail == r1);
  CHECK(r1->next.load() == nullptr);  // the run's tail is cut
  CHECK(r0->next.load() == r1);       // internal links survive
  CHECK(mine->next.load() == behind);
}

TEST_CASE("successor scan: a second run appends behind the first") {
  Chain c;
  c.holder.socket = 0;
  cna::CnaNode first_head;
  cna::CnaNode first_tail;
  first_head.socket = first_tail.socket = 1;
  first_head.next.store(&first_tail, std::memory_order_relaxed);
  first_head.sec_tail = &first_tail;
  c.holder.spin.store(cna::detail::to_handle(&first_head),
                      std::memory_order_relaxed);
  cna::CnaNode* r2 = c.add(2);
  cna::CnaNode* mine = c.add(0);
  CHECK(cna::detail::find_successor(&c.holder) == mine);
  CHECK(c.holder.spin.load() == cna::detail::to_handle(&first_head));
  CHECK(first_tail.next.load() == r2);   // appended to the existing queue
  CHECK(first_head.sec_tail == r2);      // head tracks the combined tail
  CHECK(r2->next.load() == nullptr);
}

TEST_CASE("successor scan: a miss leaves every queue untouched") {
  Chain c;
  c.holder.socket = 0;
  c.holder.spin.store(cna::detail::kGrantedEmpty, std::memory_order_relaxed);
  cna::CnaNode* r0 = c.add(1);
  cna::CnaNode* r1 = c.add(2);
  r0->sec_tail = r1;  // stale garbage from an earlier episode
  CHECK(cna::detail::find_successor(&c.holder) == nullptr);
  CHECK(c.holder.spin.load() == cna::detail::kGrantedEmpty);
  CHECK(c.holder.next.load() == r0);
  CHECK(r0->next.load() == r1);
  CHECK(r0->sec_tail == r1);  // stale values stay; they are unreachable
}

TEST_CASE("handover choice: flush splices the secondary ahead of the successor") {
  Chain c;
  c.holder.socket = 0;
  cna::CnaNode sec_head;
  cna::CnaNode sec_tail;
  sec_head.socket = sec_tail.socket = 1;
  sec_head.next.store(&sec_tail, std::memory_order_relaxed);
  sec_head.sec_tail = &sec_tail;
  c.holder.spin.store(cna::detail::to_handle(&sec_head),
                      std::memory_order_relaxed);
  cna::CnaNode* next = c.add(2);
  cna::FairnessPolicy policy;
  policy.threshold = 0;  // every draw flushes
  auto grant = cna::detail::choose_successor(&c.holder, next, policy);
  CHECK(grant.node == &sec_head);
  CHECK(grant.word == cna::detail::kGrantedEmpty);
  CHECK(sec_tail.next.load() == next);  // spliced in front of the main queue
}

TEST_CASE("handover choice: keep-local grants a same-socket waiter with the queue handle") {
  Chain c;
  c.holder.socket = 0;
  c.holder.spin.store(cna::detail::kGrantedEmpty, std::memory_order_relaxed);
  cna::CnaNode* r0 = c.add(1);
  cna::CnaNode* mine = c.add(0);
  cna::FairnessPolicy policy;
  policy.threshold = 0xffffffffu;  // draws are never zero: always keep
  auto grant = cna::detail::choose_successor(&c.holder, c.holder.next.load(),
                                             policy);
  CHECK(grant.node == mine);
  CHECK(grant.word == cna::detail::to_handle(r0));
}

TEST_CASE("handover choice: shuffle reduction skips the scan when the secondary is empty") {
  cna::FairnessPolicy policy;
  policy.shuffle_reduction_enabled = true;
  policy.shuffle_threshold = 0xffffffffu;  // skip on every draw
  {
    Chain c;
    c.holder.socket = 0;
    c.holder.spin.store(cna::detail::kGrantedEmpty, std::memory_order_relaxed);
    c.add(1);
    cna::CnaNode* next = c.holder.next.load();
    const auto before = cna::stats::snapshot();
    auto grant = cna::detail::choose_successor(&c.holder, next, policy);
    const auto delta = cna::stats::snapshot() - before;
    CHECK(grant.node == next);
    CHECK(grant.word == cna::detail::kGrantedEmpty);
    CHECK(delta.shuffle_skips == 1);
    CHECK(delta.find_successor_calls == 0);
  }
  {
    // A non-empty secondary queue disables the shortcut.
    Chain c;
    c.holder.socket = 0;
    cna::CnaNode sec_head;
    sec_head.socket = 1;
    sec_head.sec_tail = &sec_head;
    c.holder.spin.store(cna::detail::to_handle(&sec_head),
                        std::memory_order_relaxed);
    c.add(0);
    cna::CnaNode* next = c.holder.next.load();
    policy.threshold = 0xffffffffu;  // keep, so the scan must run
    const auto before = cna::stats::snapshot();
    auto grant = cna::detail::choose_successor(&c.holder, next, policy);
    const auto delta = cna::stats::snapshot() - before;
    CHECK(delta.shuffle_skips == 0);
    CHECK(delta.find_successor_calls == 1);
    CHECK(grant.node == next);
    CHECK(grant.word == c.holder.spin.load());
  }
}

TEST_CASE("tas and ticket locks exclude each other") {
  cna::TasLock tas;
  tas.acquire();
  CHECK(tas.locked());
  tas.release();
  CHECK(!tas.locked());

  cna::TicketLock ticket;
  ticket.acquire();
  ticket.release();
}

TEST_CASE("mcs contended flag tracks the queue") {
  cna::McsLock lock;
  cna::McsNode node;
  CHECK(!lock.contended());
  lock.acquire(node);
  CHECK(lock.contended());
  lock.release(node);
  CHECK(!lock.contended());
}

TEST_CASE("word tail encoding is exhaustively invertible") {
  for (int cpu = 0; cpu <= 1023; ++cpu) {
    for (int ctx = 0; ctx < cna::kWordMaxContexts; ++ctx) {
      const uint16_t code = cna::encode_tail(cpu, ctx);
      CHECK(code != 0);
      const auto back = cna::decode_tail(code);
      CHECK(back.cpu == cpu);
      CHECK(back.ctx == ctx);
    }
  }
  CHECK(cna::encode_tail(cna::kWordMaxCpu, 3) != 0);
  CHECK_THROWS_AS(cna::encode_tail(cna::kWordMaxCpu + 1, 0),
                  std::out_of_range);
  CHECK_THROWS_AS(cna::encode_tail(0, 4), std::out_of_range);
  CHECK_THROWS_AS(cna::encode_tail(-1, 0), std::out_of_range);
}

TEST_CASE("word lock: unlocked word is zero and the fast path sets only the byte") {
  cna::this_thread::set_index(0);
  cna::WordLock lock(cna::SlowPath::kMcs);
  CHECK(lock.value() == 0);
  lock.acquire();
  CHECK(lock.value() == cna::kWordLockedVal);
  lock.release();
  CHECK(lock.value() == 0);
}

TEST_CASE("word lock nesting: four levels work, the fifth is rejected") {
  cna::this_thread::set_index(0);
  cna::WordLock a(cna::SlowPath::kCna);
  cna::WordLock b(cna::SlowPath::kCna);
  cna::WordLock c(cna::SlowPath::kCna);
  cna::WordLock d(cna::SlowPath::kCna);
  cna::WordLock e(cna::SlowPath::kCna);
  CHECK(cna::word_nesting_depth() == 0);
  a.acquire();
  b.acquire();
  c.acquire();
  d.acquire();
  CHECK(cna::word_nesting_depth() == 4);
  CHECK_THROWS_AS(e.acquire(), std::logic_error);
  CHECK(cna::word_nesting_depth() == 4);
  d.release();
  c.release();
  b.release();
  a.release();
  CHECK(cna::word_nesting_depth() == 0);
}

TEST_CASE("word lock stress crosses the pending and queued paths") {
  for (auto slow : {cna::SlowPath::kMcs, cna::SlowPath::kCna}) {
    cna::WordLock lock(slow);
    uint64_t counter = 0;
    const int threads = 4;
    const uint64_t per_thread = 3000;
    std::vector<std::thread> workers;
    for (int i = 0; i < threads; ++i) {
      workers.emplace_back([&, i] {
        cna::this_thread::set_index(i);
        for (uint64_t k = 0; k < per_thread; ++k) {
          lock.acquire();
          ++counter;
          lock.release();
        }
      });
    }
    for (auto& w : workers) w.join();
    CHECK(counter == threads * per_thread);
    CHECK(lock.value() == 0);
  }
}
