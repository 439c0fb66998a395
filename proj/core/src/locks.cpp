#include "cna/locks.hpp"

#include <stdexcept>
#include <vector>

#include "cna/cna_lock.hpp"
#include "cna/mcs_lock.hpp"
#include "cna/tas_lock.hpp"
#include "cna/word_lock.hpp"

namespace cna {
namespace {

const std::vector<std::string> kNames = {
    "cna", "cna-opt", "mcs", "tas", "ticket", "word-mcs", "word-cna"};

class CnaAnyLock final : public AnyLock {
 public:
  CnaAnyLock(int n, FairnessPolicy policy)
      : nodes_(static_cast<size_t>(n)), policy_(policy) {}
  void acquire(int thread) override { lock_.acquire(nodes_[thread]); }
  void release(int thread) override { lock_.release(nodes_[thread], policy_); }

 private:
  CnaLock lock_;
  std::vector<CnaNode> nodes_;
  FairnessPolicy policy_;
};

class McsAnyLock final : public AnyLock {
 public:
  explicit McsAnyLock(int n) : nodes_(static_cast<size_t>(n)) {}
  void acquire(int thread) override { lock_.acquire(nodes_[thread]); }
  void release(int thread) override { lock_.release(nodes_[thread]); }

 private:
  McsLock lock_;
  std::vector<McsNode> nodes_;
};

class TasAnyLock final : public AnyLock {
 public:
  void acquire(int) override { lock_.acquire(); }
  void release(int) override { lock_.release(); }

 private:
  TasLock lock_;
};

class TicketAnyLock final : public AnyLock {
 public:
  void acquire(int) override { lock_.acquire(); }
  void release(int) override { lock_.release(); }

 private:
  TicketLock lock_;
};

class WordAnyLock final : public AnyLock {
 public:
  WordAnyLock(SlowPath slow, FairnessPolicy policy)
      : lock_(slow), policy_(policy) {}
  void acquire(int) override { lock_.acquire(policy_); }
  void release(int) override { lock_.release(); }

 private:
  WordLock lock_;
  FairnessPolicy policy_;
};

}  // namespace

std::optional<LockKind> parse_lock_kind(std::string_view name) {
  for (size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<LockKind>(i);
  }
  return std::nullopt;
}

std::string_view lock_kind_name(LockKind kind) {
  return kNames[static_cast<size_t>(kind)];
}

const std::vector<std::string>& lock_kind_names() { return kNames; }

std::unique_ptr<AnyLock> make_lock(LockKind kind, int max_threads,
                                   FairnessPolicy policy) {
  if (max_threads < 1) {
    throw std::invalid_argument("make_lock: need at least one thread");
  }
  policy.shuffle_reduction_enabled = (kind == LockKind::kCnaOpt);
  validate(policy);
  switch (kind) {
    case LockKind::kCna:
    case LockKind::kCnaOpt:
      return std::make_unique<CnaAnyLock>(max_threads, policy);
    case LockKind::kMcs:
      return std::make_unique<McsAnyLock>(max_threads);
    case LockKind::kTas:
      return std::make_unique<TasAnyLock>();
    case LockKind::kTicket:
      return std::make_unique<TicketAnyLock>();
    case LockKind::kWordMcs:
      return std::make_unique<WordAnyLock>(SlowPath::kMcs, policy);
    case LockKind::kWordCna:
      return std::make_unique<WordAnyLock>(SlowPath::kCna, policy);
  }
  throw std::invalid_argument("make_lock: unknown lock kind");
}

}  // namespace cna
