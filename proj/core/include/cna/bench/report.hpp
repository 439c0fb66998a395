#pragma once

#include <string>

#include "cna/bench/kv_bench.hpp"

namespace cna::bench {

// JSON: one object carrying the stable fields {lock, threads, duration_s,
// total_ops, ops_per_us, fairness, seed} plus per-thread detail. CSV: a
// header line with exactly the stable fields, then one row.
std::string emit_report(const BenchReport& report, Format format);

}  // namespace cna::bench
