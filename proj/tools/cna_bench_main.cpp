#include <iostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "cna/bench/kv_bench.hpp"
#include "cna/bench/report.hpp"
#include "cna/policy.hpp"
#include "cna/topology.hpp"

int main(int argc, char** argv) {
  cna::bench::BenchConfig config;
  std::string lock_name = "cna";
  std::string format_name = "json";
  bool raw = false;

  CLI::App app{"contended-lock benchmark: key-value map or raw acquire/release"};
  app.add_option("--lock", lock_name, "lock under test")
      ->check(CLI::IsMember(cna::lock_kind_names()));
  app.add_option("--threads", config.threads, "worker thread count");
  app.add_option("--duration", config.duration_s, "measured seconds");
  app.add_option("--key-range", config.key_range, "key universe size");
  app.add_option("--update-pct", config.update_pct,
                 "percentage of updates, split evenly insert/remove");
  app.add_option("--external-work", config.external_work,
                 "arithmetic loop iterations between operations");
  app.add_option("--seed", config.seed, "workload seed");
  app.add_option("--warmup", config.warmup_s, "uncounted warmup seconds");
  app.add_option("--format", format_name, "json or csv");
  app.add_flag("--pin", config.pin, "pin thread i to cpu i");
  app.add_option("--ops", config.ops_budget,
                 "run exactly N operations instead of a timed window");
  app.add_flag("--raw", raw,
               "repeated acquire/release instead of the key-value map");
  CLI11_PARSE(app, argc, argv);

  try {
    auto kind = cna::parse_lock_kind(lock_name);
    if (!kind) throw std::invalid_argument("unknown lock: " + lock_name);
    auto format = cna::bench::parse_format(format_name);
    if (!format) throw std::invalid_argument("unknown format: " + format_name);
    config.lock = *kind;
    config.format = *format;
    cna::topology::apply_mock_from_env();
    config.policy = cna::policy_from_env(config.policy);
    cna::validate(config.policy);
    cna::default_policy() = config.policy;

    const cna::bench::BenchReport report =
        raw ? cna::bench::run_raw_bench(config)
            : cna::bench::run_kv_bench(config);
    std::cout << cna::bench::emit_report(report, config.format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
