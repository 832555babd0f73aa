#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sacre/harness/log.hpp"
#include "sacre/harness/report.hpp"
#include "sacre/harness/runner.hpp"
#include "sacre/sim/scenario.hpp"
#include "sacre/sim/trace.hpp"

namespace fs = std::filesystem;
using namespace sacre;

namespace {

int cmd_run(const std::string& scenario, int replications, std::uint64_t seed,
            double scale, const std::string& out, bool realtime) {
  fs::create_directories(out);
  harness::RunOptions options;
  options.scale = scale;
  options.seed = seed;
  options.realtime = realtime;

  std::vector<std::string> ids;
  if (scenario == "all") ids = sim::scenario_ids();
  else ids.push_back(scenario);

  std::vector<harness::ReplicationResult> runs;
  for (const auto& id : ids) {
    auto results = harness::run_scenario(id, replications, options);
    runs.insert(runs.end(), results.begin(), results.end());
  }

  const auto report = harness::aggregate(runs);
  harness::write_report_json(report, (fs::path(out) / "report.json").string());
  harness::write_adaptations_csv(harness::collect_records(runs),
                                 (fs::path(out) / "adaptations.csv").string());
  std::cout << harness::report_to_json(report);

  for (const auto& r : runs)
    if (r.outcome == "error") return 1;
  return 0;
}

int cmd_gen(const std::string& scenario, std::uint64_t seed, double scale,
            const std::string& out) {
  fs::create_directories(out);
  const auto gen = sim::generate_scenario(scenario, seed, scale);
  sim::write_trace_csv(gen.rows, (fs::path(out) / (scenario + "_trace.csv")).string());
  sim::write_actions_csv(gen.actions,
                         (fs::path(out) / (scenario + "_actions.csv")).string());
  nlohmann::json meta;
  meta["scenario"] = gen.id;
  meta["seed"] = seed;
  meta["scale"] = scale;
  meta["injectionIteration"] = gen.injection_iteration;
  meta["injectionTick"] = gen.injection_tick;
  meta["ticks"] = gen.rows.size();
  std::ofstream f(fs::path(out) / (scenario + "_meta.json"), std::ios::binary);
  f << meta.dump(2) << "\n";
  harness::log(harness::LogLevel::Info,
               "wrote " + std::to_string(gen.rows.size()) + " ticks for " + scenario);
  return 0;
}

int cmd_stats(const std::string& in) {
  const auto records =
      harness::read_adaptations_csv((fs::path(in) / "adaptations.csv").string());
  std::cout << harness::report_to_json(harness::aggregate_records(records));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"self-adaptive contextual-requirements runtime, desk-scale harness"};
  app.require_subcommand(1);

  auto scenario_check = CLI::IsMember(
      {"us1", "us2", "us3", "us4a", "us4b", "us5", "all"});
  auto gen_scenario_check =
      CLI::IsMember({"us1", "us2", "us3", "us4a", "us4b", "us5"});

  std::string scenario = "all";
  int replications = 1;
  std::uint64_t seed = 42;
  double scale = 0.1;
  std::string out = "out";
  std::string in_dir;
  bool realtime = false;

  auto* run = app.add_subcommand("run", "replay scenarios through the loop");
  run->add_option("--scenario", scenario)->required()->check(scenario_check);
  run->add_option("--replications", replications)->check(CLI::PositiveNumber);
  run->add_option("--seed", seed);
  run->add_option("--scale", scale)->check(CLI::PositiveNumber);
  run->add_option("--out", out)->required();
  run->add_flag("--realtime", realtime);

  auto* gen = app.add_subcommand("gen", "write a scenario trace to disk");
  gen->add_option("--scenario", scenario)->required()->check(gen_scenario_check);
  gen->add_option("--seed", seed);
  gen->add_option("--scale", scale)->check(CLI::PositiveNumber);
  gen->add_option("--out", out)->required();

  auto* stats = app.add_subcommand("stats", "re-aggregate a run directory");
  stats->add_option("--in", in_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_run(scenario, replications, seed, scale, out, realtime);
    if (gen->parsed()) return cmd_gen(scenario, seed, scale, out);
    return cmd_stats(in_dir);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
}
