#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "cna/sim/metrics.hpp"

namespace cna::sim {

double fairness_factor(const std::vector<uint64_t>& counts) {
  const size_t n = counts.size();
  if (n < 2) {
    throw std::invalid_argument("fairness needs at least two threads");
  }
  const uint64_t total = std::accumulate(counts.begin(), counts.end(),
                                         uint64_t{0});
  if (total == 0) {
    throw std::invalid_argument("fairness is undefined with zero operations");
  }
  std::vector<uint64_t> sorted = counts;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const size_t top = (n + 1) / 2;
  const uint64_t top_sum =
      std::accumulate(sorted.begin(), sorted.begin() + top, uint64_t{0});
  return static_cast<double>(top_sum) / static_cast<double>(total);
}

double intra_socket_handover_ratio(const SimTrace& trace) {
  uint64_t handovers = 0;
  uint64_t intra = 0;
  int last_release_socket = -1;
  for (const TraceEvent& e : trace.events) {
    if (e.event == Ev::kRelease) {
      last_release_socket = e.socket;
    } else if (e.event == Ev::kGrant && e.handover) {
      ++handovers;
      if (e.socket == last_release_socket) ++intra;
    }
  }
  if (handovers == 0) {
    throw std::invalid_argument("trace contains no handover");
  }
  return static_cast<double>(intra) / static_cast<double>(handovers);
}

double intra_socket_ratio_of_grants(const std::vector<int>& grant_threads,
                                    const std::vector<int>& socket_by_thread) {
  if (grant_threads.size() < 2) {
    throw std::invalid_argument("need at least two grants");
  }
  uint64_t same = 0;
  for (size_t i = 1; i < grant_threads.size(); ++i) {
    if (socket_by_thread.at(grant_threads[i - 1]) ==
        socket_by_thread.at(grant_threads[i])) {
      ++same;
    }
  }
  return static_cast<double>(same) /
         static_cast<double>(grant_threads.size() - 1);
}

}  // namespace cna::sim
