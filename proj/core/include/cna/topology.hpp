#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>

namespace cna::topology {

// Socket (NUMA node) identifiers are small non-negative integers. -1 is the
// "not recorded yet" sentinel used inside queue nodes, never returned by a
// provider query.
using SocketId = int;
inline constexpr SocketId kUnknownSocket = -1;

enum class Mode { kReal, kMock };

// Switches the process-wide provider. The mock provider maps per-thread
// indices (cna::this_thread) to sockets and is what the simulator tests and
// the deterministic benchmark mode use.
void use_real();
void use_mock(const std::map<int, SocketId>& by_thread = {});
Mode mode();

// Replaces the mock map. Threads observe the new map on their next query.
// Throws std::invalid_argument on negative socket ids; requires mock mode.
void set_mock_topology(const std::map<int, SocketId>& by_thread);

// Socket of the calling thread. Cached per thread and re-queried every
// refresh_interval() calls; a mock map swap invalidates caches immediately.
// Never returns a negative id. If the OS query is unavailable in real mode
// the provider degrades to a single-socket view (socket 0) and sets the
// degraded flag; that only costs locality, not correctness.
SocketId current_numa_node();

// Number of distinct sockets the provider knows about; always >= 1.
int socket_count();

bool degraded();

uint32_t refresh_interval();
void set_refresh_interval(uint32_t acquisitions);

// Raw (uncached) provider queries made by this thread; test instrumentation
// for the cache behavior.
uint64_t raw_queries_this_thread();

// Parses a "t0:0,t1:1,..." mock spec (the CNA_MOCK_TOPOLOGY format).
// Returns nullopt on malformed input.
std::optional<std::map<int, SocketId>> parse_mock_spec(std::string_view spec);

// Installs a mock topology from CNA_MOCK_TOPOLOGY if the variable is set.
// Returns true if mock mode was selected.
bool apply_mock_from_env();

}  // namespace cna::topology
