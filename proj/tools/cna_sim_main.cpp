#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cna/policy.hpp"
#include "cna/sim/oracle.hpp"
#include "cna/sim/scheduler.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print_summary(const cna::sim::SimSummary& s) {
  std::cerr << "grants:";
  for (uint64_t g : s.grants_per_thread) std::cerr << ' ' << g;
  std::cerr << "\nhandovers: " << s.handovers
            << "\nintra_socket_handovers: " << s.intra_socket_handovers
            << "\nreleases_with_successor: " << s.releases_with_successor
            << "\nsuccessor_scans: " << s.find_successor_calls
            << "\nshuffle_skips: " << s.shuffle_skips << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  std::string lock_name = "cna";
  std::string schedule_path;
  std::vector<uint32_t> draws;
  uint32_t draw_seed = cna::FairnessPolicy{}.seed;
  uint32_t random_seed = 0;
  bool random_mode = false;
  bool enumerate = false;
  bool verify = false;
  bool emit_schedule = false;
  bool summary = false;
  uint64_t max_steps = 50'000'000;
  cna::sim::SimConfig config;

  CLI::App app{"deterministic lock interleaving runner"};
  app.add_option("--lock", lock_name, "cna, cna-opt, mcs, word-mcs, word-cna");
  app.add_option("--threads", config.threads, "thread count");
  app.add_option("--sockets", config.sockets,
                 "per-thread socket ids, e.g. --sockets 0,0,1,1")
      ->delimiter(',');
  app.add_option("--acquisitions", config.acquisitions,
                 "per-thread acquisition counts")
      ->delimiter(',');
  app.add_option("--schedule", schedule_path,
                 "replay a schedule file of whitespace-separated thread indices");
  app.add_option("--random-seed", random_seed, "run a seeded random schedule")
      ->expected(1);
  app.add_flag("--enumerate", enumerate,
               "exhaustively check every interleaving");
  app.add_option("--draws", draws,
                 "scripted fairness draws, cycled; e.g. --draws 0xffffffff")
      ->delimiter(',');
  app.add_option("--draw-seed", draw_seed, "seed for per-thread draw streams");
  app.add_option("--max-steps", max_steps, "random-run step cap");
  app.add_flag("--verify", verify, "check the grant order against the model");
  app.add_flag("--emit-schedule", emit_schedule,
               "print the executed schedule to stderr");
  app.add_flag("--summary", summary, "print run statistics to stderr");
  auto* random_opt = app.get_option("--random-seed");
  CLI11_PARSE(app, argc, argv);
  random_mode = random_opt->count() > 0;

  try {
    auto kind = cna::parse_lock_kind(lock_name);
    if (!kind) throw std::invalid_argument("unknown lock: " + lock_name);
    config.lock = *kind;
    // A single value applies to every thread.
    if (config.sockets.size() == 1 && config.threads > 1) {
      config.sockets.assign(static_cast<size_t>(config.threads),
                            config.sockets[0]);
    }
    if (config.acquisitions.size() == 1 && config.threads > 1) {
      config.acquisitions.assign(static_cast<size_t>(config.threads),
                                 config.acquisitions[0]);
    }
    config.policy = cna::policy_from_env(config.policy);
    config.policy.seed = draw_seed;
    cna::validate(config.policy);
    if (!draws.empty()) {
      config.draws = cna::sim::DrawSource::scripted(draws);
    } else {
      config.draws = cna::sim::DrawSource::seeded(draw_seed, config.threads);
    }

    if (static_cast<int>(random_mode) + static_cast<int>(enumerate) +
            static_cast<int>(!schedule_path.empty()) !=
        1) {
      throw std::invalid_argument(
          "pick exactly one of --schedule, --random-seed, --enumerate");
    }

    if (enumerate) {
      uint64_t verified = 0;
      auto stats = cna::sim::enumerate_schedules(
          config, [&](const cna::sim::Sim& sim) {
            if (verify) cna::sim::verify_against_oracle(sim);
            ++verified;
          });
      std::cout << "schedules: " << stats.schedules
                << "\nmax_depth: " << stats.max_depth << '\n';
      if (verify) std::cout << "verified: " << verified << '\n';
      return 0;
    }

    if (random_mode) {
      auto result = cna::sim::run_random(config, random_seed, max_steps);
      std::cout << cna::sim::format_trace(result.trace);
      if (emit_schedule) {
        for (size_t i = 0; i < result.schedule.size(); ++i) {
          std::cerr << (i ? " " : "") << result.schedule[i];
        }
        std::cerr << '\n';
      }
      cna::sim::Sim replay(config);
      for (int t : result.schedule) replay.step(t);
      if (verify) cna::sim::verify_against_oracle(replay);
      if (summary) print_summary(replay.summary());
      return 0;
    }

    const std::vector<int> schedule =
        cna::sim::parse_schedule(read_file(schedule_path));
    auto result = cna::sim::run_schedule(config, schedule);
    std::cout << cna::sim::format_trace(result.trace);
    if (!result.error.empty()) {
      std::cerr << "error: " << result.error << '\n';
      return 3;
    }
    if (verify || summary) {
      cna::sim::Sim replay(config);
      for (int t : schedule) replay.step(t);
      if (verify && result.complete) cna::sim::verify_against_oracle(replay);
      if (summary) print_summary(replay.summary());
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
