#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cna::sim {

enum class Ev : uint8_t {
  kEnqueue,
  kGrant,
  kRelease,
  kMoveToSecondary,
  kSpliceSecondary,
  kFlushDraw,
};

std::string_view ev_name(Ev ev);

struct TraceEvent {
  uint32_t step;    // index of the step that produced the event
  int16_t thread;   // subject thread
  Ev event;
  bool handover;    // grants only: handed over by a releasing holder
  int16_t socket;   // subject thread's configured socket
};

struct SimTrace {
  std::vector<TraceEvent> events;
  bool complete = false;
};

// Line-delimited export, one "step thread event socket" record per line.
std::string format_trace(const SimTrace& trace);

// Schedule files are whitespace-separated thread indices.
std::vector<int> parse_schedule(std::string_view text);

}  // namespace cna::sim
