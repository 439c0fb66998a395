#pragma once

#include <cstdint>
#include <vector>

#include "cna/sim/trace.hpp"

namespace cna::sim {

// Sorted top-half share of per-thread counts: 0.5 = perfectly fair, 1.0 =
// total starvation of the bottom half. For odd n the top ceil(n/2) counts.
// Throws std::invalid_argument on fewer than 2 threads or an all-zero
// vector.
double fairness_factor(const std::vector<uint64_t>& counts);

// Fraction of handovers (a grant passed on by a releasing holder) where the
// new holder's socket equals the previous holder's. Throws
// std::invalid_argument when the trace has no handover.
double intra_socket_handover_ratio(const SimTrace& trace);

// Same ratio over an explicit grant sequence (consecutive grants are
// handovers), e.g. a reference-model grant order. Throws on fewer than two
// grants.
double intra_socket_ratio_of_grants(const std::vector<int>& grant_threads,
                                    const std::vector<int>& socket_by_thread);

}  // namespace cna::sim
