#include <sstream>

#include <json.hpp>

#include "cna/bench/report.hpp"

namespace cna::bench {

std::string emit_report(const BenchReport& report, Format format) {
  if (format == Format::kCsv) {
    std::ostringstream os;
    os.precision(6);
    os << "lock,threads,duration_s,total_ops,ops_per_us,fairness,seed\n"
       << report.lock << ',' << report.threads << ',' << report.duration_s
       << ',' << report.total_ops << ',' << report.ops_per_us << ','
       << report.fairness << ',' << report.seed << '\n';
    return os.str();
  }
  nlohmann::json j;
  j["lock"] = report.lock;
  j["threads"] = report.threads;
  j["duration_s"] = report.duration_s;
  j["total_ops"] = report.total_ops;
  j["ops_per_us"] = report.ops_per_us;
  j["fairness"] = report.fairness;
  j["seed"] = report.seed;
  j["per_thread_ops"] = report.per_thread_ops;
  j["fairness_by_convention"] = report.fairness_by_convention;
  j["map_size"] = report.map_size;
  j["cs_counter"] = report.cs_counter;
  return j.dump(2) + "\n";
}

}  // namespace cna::bench
