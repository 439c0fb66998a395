#include <cctype>
#include <charconv>
#include <stdexcept>
#include <string>

#include "cna/sim/sim.hpp"

namespace cna::sim {

DrawSource DrawSource::scripted(std::vector<uint32_t> values) {
  if (values.empty()) {
    throw std::invalid_argument("draw script must not be empty");
  }
  DrawSource d;
  d.scripted_ = true;
  d.script_ = std::move(values);
  return d;
}

DrawSource DrawSource::seeded(uint32_t seed, int threads) {
  DrawSource d;
  d.scripted_ = false;
  d.seed_ = seed;
  d.streams_.reserve(static_cast<size_t>(threads));
  for (int i = 0; i < threads; ++i) {
    d.streams_.emplace_back(mix_seed(seed, static_cast<uint32_t>(i)));
  }
  return d;
}

void DrawSource::ensure_threads(int threads) {
  if (scripted_) return;
  for (int i = static_cast<int>(streams_.size()); i < threads; ++i) {
    streams_.emplace_back(mix_seed(seed_, static_cast<uint32_t>(i)));
  }
}

uint32_t DrawSource::next_for(int thread) {
  if (scripted_) {
    // The script cycles; a single value pins every draw.
    const uint32_t v = script_[cursor_ % script_.size()];
    ++cursor_;
    return v;
  }
  return streams_.at(static_cast<size_t>(thread)).next();
}

std::string_view ev_name(Ev ev) {
  switch (ev) {
    case Ev::kEnqueue: return "enqueue";
    case Ev::kGrant: return "grant";
    case Ev::kRelease: return "release";
    case Ev::kMoveToSecondary: return "move_to_secondary";
    case Ev::kSpliceSecondary: return "splice_secondary";
    case Ev::kFlushDraw: return "flush_draw";
  }
  return "?";
}

std::string format_trace(const SimTrace& trace) {
  std::string out;
  out.reserve(trace.events.size() * 24);
  for (const TraceEvent& e : trace.events) {
    out += std::to_string(e.step);
    out += ' ';
    out += std::to_string(e.thread);
    out += ' ';
    out += ev_name(e.event);
    out += ' ';
    out += std::to_string(e.socket);
    out += '\n';
  }
  return out;
}

std::vector<int> parse_schedule(std::string_view text) {
  std::vector<int> out;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() &&
           std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    if (i >= text.size()) break;
    size_t j = i;
    while (j < text.size() &&
           !std::isspace(static_cast<unsigned char>(text[j]))) {
      ++j;
    }
    int value = 0;
    auto res = std::from_chars(text.data() + i, text.data() + j, value);
    if (res.ec != std::errc{} || res.ptr != text.data() + j) {
      throw std::invalid_argument("schedule file: not a thread index: " +
                                  std::string(text.substr(i, j - i)));
    }
    out.push_back(value);
    i = j;
  }
  return out;
}

void validate(const SimConfig& config) {
  if (config.threads < 1) {
    throw std::invalid_argument("sim: need at least one thread");
  }
  if (!config.sockets.empty() &&
      config.sockets.size() != static_cast<size_t>(config.threads)) {
    throw std::invalid_argument("sim: socket map size != thread count");
  }
  for (int s : config.sockets) {
    if (s < 0) throw std::invalid_argument("sim: negative socket id");
  }
  if (!config.acquisitions.empty() &&
      config.acquisitions.size() != static_cast<size_t>(config.threads)) {
    throw std::invalid_argument("sim: acquisition counts size != thread count");
  }
  for (int a : config.acquisitions) {
    if (a < 0) throw std::invalid_argument("sim: negative acquisition count");
  }
  switch (config.lock) {
    case LockKind::kCna:
    case LockKind::kCnaOpt:
    case LockKind::kMcs:
      break;
    case LockKind::kWordMcs:
    case LockKind::kWordCna:
      // Only the fast and pending paths are modeled; two threads never
      // reach the queued slow path.
      if (config.threads > 2) {
        throw std::invalid_argument(
            "sim: word locks are modeled for at most 2 threads");
      }
      break;
    default:
      throw std::invalid_argument("sim: lock kind has no stepped model");
  }
}

Sim::Sim(SimConfig config) : config_(std::move(config)) {
  if (config_.sockets.empty()) {
    config_.sockets.assign(static_cast<size_t>(config_.threads), 0);
  }
  if (config_.acquisitions.empty()) {
    config_.acquisitions.assign(static_cast<size_t>(config_.threads), 1);
  }
  validate(config_);
  config_.policy.shuffle_reduction_enabled =
      (config_.lock == LockKind::kCnaOpt);
  cna_ = config_.lock == LockKind::kCna || config_.lock == LockKind::kCnaOpt;
  word_ = config_.lock == LockKind::kWordMcs ||
          config_.lock == LockKind::kWordCna;
  config_.draws.ensure_threads(config_.threads);
  // The run advances a working copy; config_.draws stays replayable.
  draws_ = config_.draws;

  nodes_.resize(static_cast<size_t>(config_.threads));
  threads_.resize(static_cast<size_t>(config_.threads));
  summary_.grants_per_thread.assign(static_cast<size_t>(config_.threads), 0);
  for (int t = 0; t < config_.threads; ++t) {
    threads_[t].episodes_left = config_.acquisitions[t];
    threads_[t].pc = word_ ? Pc::kWordTry : Pc::kArrive;
    if (threads_[t].episodes_left == 0) {
      threads_[t].pc = Pc::kDone;
      ++done_threads_;
    }
    target_acquisitions_ += static_cast<uint64_t>(config_.acquisitions[t]);
  }
}

bool Sim::enabled(int thread) const {
  if (thread < 0 || thread >= config_.threads) return false;
  const ThreadState& th = threads_[thread];
  switch (th.pc) {
    case Pc::kDone:
      return false;
    case Pc::kSpinWait:
      return nodes_[thread].spin != 0;
    case Pc::kReleaseWaitLink:
      return nodes_[thread].next != kNull;
    case Pc::kWordTry:
      // Coarse model: arrivals wait out a pending handover in flight.
      return word_state_ == 0 || word_state_ == 1;
    case Pc::kWordPendWait:
      return (word_state_ & 0xffu) == 0;
    default:
      return true;
  }
}

int Sim::enabled_count() const {
  int n = 0;
  for (int t = 0; t < config_.threads; ++t) {
    if (enabled(t)) ++n;
  }
  return n;
}

bool Sim::complete() const {
  return done_threads_ == static_cast<uint64_t>(config_.threads);
}

void Sim::emit(Ev ev, int thread, bool handover) {
  if (!config_.record_trace) return;
  trace_.events.push_back(TraceEvent{steps_, static_cast<int16_t>(thread), ev,
                                     handover,
                                     static_cast<int16_t>(
                                         config_.sockets[thread])});
}

void Sim::feed_arrival(int t) {
  if (config_.record_trace) {
    feed_.push_back(OracleEvent{false, static_cast<int16_t>(t)});
  }
  const int socket = config_.sockets[t];
  if (summary_.last_arrival_socket >= 0) {
    ++summary_.arrival_pairs;
    if (summary_.last_arrival_socket == socket) {
      ++summary_.arrival_same_socket_pairs;
    }
  }
  summary_.last_arrival_socket = socket;
}

void Sim::feed_release(int t) {
  if (config_.record_trace) {
    feed_.push_back(OracleEvent{true, static_cast<int16_t>(t)});
  }
}

// A node becomes part of the queue proper once the linked-chain prefix
// reaches it; only then can a holder's scan see it. Arrivals are fed to the
// reference model in this order, which makes the model's view match what
// any handover decision could observe.
void Sim::cascade_joins(int start) {
  int n = start;
  while (n != kNull && nodes_[n].linked && !nodes_[n].joined &&
         threads_[n].prev != kNull && nodes_[threads_[n].prev].joined) {
    nodes_[n].joined = true;
    feed_arrival(n);
    n = nodes_[n].swap_child;
  }
}

uint32_t Sim::draw(int t) { return draws_.next_for(t); }

void Sim::become_holder(int t, bool handover) {
  holder_ = t;
  ++summary_.total_grants;
  ++summary_.grants_per_thread[t];
  if (config_.record_trace) grant_order_.push_back(t);
  if (handover) {
    ++summary_.handovers;
    if (config_.sockets[t] == last_release_socket_) {
      ++summary_.intra_socket_handovers;
    }
  }
  emit(Ev::kGrant, t, handover);
}

void Sim::finish_episode(int t) {
  ThreadState& th = threads_[t];
  if (config_.check_invariants) {
    if (th.episode_swaps != 1 && !word_) {
      throw SimViolation("episode used " + std::to_string(th.episode_swaps) +
                         " tail exchanges");
    }
    if (th.episode_cas > 1) {
      throw SimViolation("release used more than one compare-and-swap");
    }
  }
  ++completed_acquisitions_;
  --th.episodes_left;
  if (th.episodes_left > 0) {
    th.pc = word_ ? Pc::kWordTry : Pc::kArrive;
  } else {
    th.pc = Pc::kDone;
    ++done_threads_;
    if (done_threads_ == static_cast<uint64_t>(config_.threads)) {
      trace_.complete = true;
    }
  }
}

void Sim::check_partition_if_quiescent() const {
  if (!config_.check_invariants || word_) return;
  for (int t = 0; t < config_.threads; ++t) {
    switch (threads_[t].pc) {
      case Pc::kArrive:
      case Pc::kSpinWait:
      case Pc::kCsLoad:
      case Pc::kCsStore:
      case Pc::kRelease:
      case Pc::kReleaseWaitLink:
      case Pc::kDone:
        break;
      default:
        return;  // a link or handover store is mid-flight
    }
  }
  if (holder_ == kNull) {
    if (tail_ != kNull) {
      throw SimViolation("free lock with a nonempty queue");
    }
    for (int t = 0; t < config_.threads; ++t) {
      if (threads_[t].pc == Pc::kSpinWait) {
        throw SimViolation("waiter with no holder (lost wakeup)");
      }
    }
    return;
  }
  // Collect both queues from the holder's vantage point.
  std::vector<char> in_queue(static_cast<size_t>(config_.threads), 0);
  int guard = 0;
  for (int n = nodes_[holder_].next; n != kNull; n = nodes_[n].next) {
    if (in_queue[n] || ++guard > config_.threads) {
      throw SimViolation("main queue is not a simple chain");
    }
    in_queue[n] = 1;
  }
  const uint64_t spin = nodes_[holder_].spin;
  if (spin > 1) {
    for (int n = node_of_handle(spin); n != kNull; n = nodes_[n].next) {
      if (in_queue[n] || ++guard > 2 * config_.threads) {
        throw SimViolation("secondary queue overlaps the main queue");
      }
      in_queue[n] = 2;
    }
  }
  for (int t = 0; t < config_.threads; ++t) {
    const bool waiting =
        threads_[t].pc == Pc::kSpinWait && nodes_[t].spin == 0;
    if (waiting && !in_queue[t]) {
      throw SimViolation("waiter in neither queue");
    }
    if (!waiting && in_queue[t] && t != holder_) {
      throw SimViolation("non-waiting thread found in a queue");
    }
  }
}

}  // namespace cna::sim
