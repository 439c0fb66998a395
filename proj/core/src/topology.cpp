#include "cna/topology.hpp"

#include <atomic>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <stdexcept>
#include <string>
#include <system_error>

#ifdef __linux__
#include <sys/syscall.h>
#include <unistd.h>
#endif

#include "cna/thread_id.hpp"

namespace cna::topology {
namespace {

std::mutex g_mu;
std::atomic<Mode> g_mode{Mode::kReal};
std::map<int, SocketId> g_mock;
int g_mock_sockets = 1;

// Bumped on every provider change so per-thread caches refresh at once
// instead of waiting out their countdown.
std::atomic<uint64_t> g_generation{0};
std::atomic<uint32_t> g_refresh_interval{1024};
std::atomic<bool> g_degraded{false};

struct ThreadCache {
  SocketId value = 0;
  uint32_t remaining = 0;
  uint64_t generation = ~uint64_t{0};
  int for_index = -1;  // a re-indexed thread must not reuse its old answer
  uint64_t raw_queries = 0;
};
thread_local ThreadCache tl_cache;

int count_sys_nodes() {
  namespace fs = std::filesystem;
  std::error_code ec;
  int nodes = 0;
  for (const auto& entry : fs::directory_iterator("/sys/devices/system/node", ec)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("node", 0) == 0 && name.size() > 4 &&
        std::isdigit(static_cast<unsigned char>(name[4]))) {
      ++nodes;
    }
  }
  return nodes;  // 0 when the directory is missing
}

int real_socket_count() {
  static const int count = [] {
    int n = count_sys_nodes();
    if (n < 1) {
      g_degraded.store(true, std::memory_order_relaxed);
      n = 1;
    }
    return n;
  }();
  return count;
}

SocketId real_query() {
#ifdef __linux__
  unsigned cpu = 0;
  unsigned node = 0;
  if (syscall(SYS_getcpu, &cpu, &node, nullptr) == 0) {
    if (static_cast<int>(node) < real_socket_count()) {
      return static_cast<SocketId>(node);
    }
  }
#endif
  g_degraded.store(true, std::memory_order_relaxed);
  return 0;
}

SocketId raw_query() {
  ++tl_cache.raw_queries;
  if (g_mode.load(std::memory_order_relaxed) == Mode::kMock) {
    std::lock_guard<std::mutex> lk(g_mu);
    auto it = g_mock.find(cna::this_thread::index());
    return it == g_mock.end() ? 0 : it->second;
  }
  return real_query();
}

void install_mock_locked(const std::map<int, SocketId>& by_thread) {
  for (const auto& [tid, socket] : by_thread) {
    if (socket < 0) {
      throw std::invalid_argument("mock topology: negative socket id");
    }
    (void)tid;
  }
  g_mock = by_thread;
  int max_socket = -1;
  for (const auto& [tid, socket] : g_mock) {
    (void)tid;
    if (socket > max_socket) max_socket = socket;
  }
  g_mock_sockets = max_socket + 1 < 1 ? 1 : max_socket + 1;
  g_generation.fetch_add(1, std::memory_order_relaxed);
}

}  // namespace

void use_real() {
  std::lock_guard<std::mutex> lk(g_mu);
  g_mode.store(Mode::kReal, std::memory_order_relaxed);
  g_generation.fetch_add(1, std::memory_order_relaxed);
}

void use_mock(const std::map<int, SocketId>& by_thread) {
  std::lock_guard<std::mutex> lk(g_mu);
  g_mode.store(Mode::kMock, std::memory_order_relaxed);
  install_mock_locked(by_thread);
}

Mode mode() { return g_mode.load(std::memory_order_relaxed); }

void set_mock_topology(const std::map<int, SocketId>& by_thread) {
  std::lock_guard<std::mutex> lk(g_mu);
  if (g_mode.load(std::memory_order_relaxed) != Mode::kMock) {
    throw std::logic_error("set_mock_topology requires mock mode");
  }
  install_mock_locked(by_thread);
}

SocketId current_numa_node() {
  ThreadCache& c = tl_cache;
  const uint64_t gen = g_generation.load(std::memory_order_relaxed);
  const int idx = cna::this_thread::index();
  if (c.generation != gen || c.for_index != idx || c.remaining == 0) {
    c.value = raw_query();
    c.remaining = g_refresh_interval.load(std::memory_order_relaxed);
    if (c.remaining == 0) c.remaining = 1;
    c.generation = gen;
    c.for_index = idx;
  }
  --c.remaining;
  return c.value;
}

int socket_count() {
  std::lock_guard<std::mutex> lk(g_mu);
  if (g_mode == Mode::kMock) return g_mock_sockets;
  return real_socket_count();
}

bool degraded() { return g_degraded.load(std::memory_order_relaxed); }

uint32_t refresh_interval() {
  return g_refresh_interval.load(std::memory_order_relaxed);
}

void set_refresh_interval(uint32_t acquisitions) {
  if (acquisitions == 0) {
    throw std::invalid_argument("refresh interval must be positive");
  }
  g_refresh_interval.store(acquisitions, std::memory_order_relaxed);
  g_generation.fetch_add(1, std::memory_order_relaxed);
}

uint64_t raw_queries_this_thread() { return tl_cache.raw_queries; }

std::optional<std::map<int, SocketId>> parse_mock_spec(std::string_view spec) {
  std::map<int, SocketId> out;
  size_t pos = 0;
  while (pos < spec.size()) {
    size_t comma = spec.find(',', pos);
    std::string_view item = spec.substr(
        pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    pos = comma == std::string_view::npos ? spec.size() : comma + 1;
    if (item.empty()) continue;
    if (item.front() != 't') return std::nullopt;
    size_t colon = item.find(':');
    if (colon == std::string_view::npos || colon < 2) return std::nullopt;
    int tid = -1;
    int socket = -1;
    auto tid_res = std::from_chars(item.data() + 1, item.data() + colon, tid);
    auto sock_res =
        std::from_chars(item.data() + colon + 1, item.data() + item.size(), socket);
    if (tid_res.ec != std::errc{} || tid_res.ptr != item.data() + colon ||
        sock_res.ec != std::errc{} || sock_res.ptr != item.data() + item.size() ||
        tid < 0 || socket < 0) {
      return std::nullopt;
    }
    out[tid] = socket;
  }
  return out;
}

bool apply_mock_from_env() {
  const char* env = std::getenv("CNA_MOCK_TOPOLOGY");
  if (env == nullptr) return false;
  auto parsed = parse_mock_spec(env);
  if (!parsed) {
    throw std::invalid_argument("CNA_MOCK_TOPOLOGY: malformed spec");
  }
  use_mock(*parsed);
  return true;
}

}  // namespace cna::topology
