#include "sacre/harness/runner.hpp"

#include <cmath>
#include <thread>

#include "sacre/harness/log.hpp"
#include "sacre/mining/learner.hpp"
#include "sacre/sim/catalog.hpp"
#include "sacre/sim/vehicle.hpp"

namespace sacre::harness {

namespace {

bool is_sensor_fault(reqmodel::CaseKind k) {
  return k == reqmodel::CaseKind::Case2a || k == reqmodel::CaseKind::Case2b;
}

}  // namespace

ReplicationResult run_replication(const std::string& scenario_id, int replication,
                                  const RunOptions& options) {
  ReplicationResult result;
  result.scenario_id = scenario_id;
  result.replication = replication;
  try {
    const std::uint64_t seed = options.seed + static_cast<std::uint64_t>(replication);
    const auto scenario = sim::generate_scenario(scenario_id, seed, options.scale);
    result.injection_iteration = scenario.injection_iteration;

    const auto aliases = sim::drowsiness_aliases();
    sim::SmartVehicle vehicle(sim::drowsiness_variables(),
                              scenario.initial_requirements, scenario.rows,
                              scenario.actions);

    loop::LoopOptions loop_options;
    // Deterministic cooperative scheduling: replication results and response
    // times then depend on the pipeline's work, not on scheduler wake-ups.
    loop_options.synchronous = true;
    loop_options.analysis_seed = seed;
    loop_options.aliases = aliases;
    loop_options.initially_decalibrated = scenario.initially_decalibrated;
    loop_options.initially_inactive_variables = scenario.initially_inactive_variables;

    loop::Loop loop(sim::default_policies(), vehicle, loop_options);
    loop.start();

    log(LogLevel::Info, "running " + scenario_id + " replication " +
                            std::to_string(replication) + " (" +
                            std::to_string(scenario.rows.size()) + " ticks)");

    const double ratio = sim::SmartVehicle::kTicksPerSecond / sim::kLoopFrequency;
    const auto wall_start = std::chrono::steady_clock::now();
    std::int64_t produced = 0;
    for (std::int64_t i = 0; !vehicle.finished(); ++i) {
      const auto needed =
          static_cast<std::int64_t>(std::floor(static_cast<double>(i + 1) * ratio));
      while (produced < needed && !vehicle.finished()) {
        vehicle.tick();
        ++produced;
      }
      loop.iteration(vehicle.latest().snapshot, vehicle.latest().behaviors);
      loop.wait_quiescent(options.quiescent_cap);
      if (options.realtime)
        std::this_thread::sleep_until(
            wall_start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                             std::chrono::duration<double>((i + 1) / sim::kLoopFrequency)));
    }
    loop.wait_quiescent(std::chrono::microseconds(200000));
    result.iterations = loop.iterations_run();
    result.learner_calls = loop.learner_calls();
    result.change_plans = loop.change_plans_enacted();
    loop.stop();

    for (const auto& e : loop.events().all<loop::DissatisfactionEvent>())
      if (e.iteration < scenario.injection_iteration)
        result.pre_injection_dissatisfaction = true;

    for (const auto& e : loop.events().all<loop::SymptomEvent>()) {
      const auto kind = reqmodel::kind_of(e.symptom.ucase);
      if (is_sensor_fault(kind) && result.first_sensor_symptom_iteration < 0)
        result.first_sensor_symptom_iteration = e.symptom.tick;
    }

    for (const auto& e : loop.events().all<loop::Case2RecoveryEvent>())
      result.recoveries.push_back({e.variable, e.response_ms, e.iteration});

    for (const auto& e : loop.events().all<loop::EnactmentEvent>()) {
      AdaptationRecord rec;
      rec.scenario_id = scenario_id;
      rec.replication = replication;
      rec.requirement_id = e.requirement_id;
      rec.kind = reqmodel::case_name(e.kind);
      rec.response_ms = e.response_ms;
      if (e.measures) {
        rec.precision = e.measures->precision;
        rec.recall = e.measures->recall;
        rec.f_measure = e.measures->f_measure;
      }
      rec.dataset_rows = e.dataset_rows;
      rec.iteration = e.iteration;
      rec.operationalization = e.operationalization_text;
      if (!scenario.expected.empty() &&
          e.requirement_id == scenario.target_requirement) {
        const auto learned =
            reqmodel::parse_operationalization(e.operationalization_text, aliases);
        rec.agreement = mining::operationalization_agreement(
            learned, scenario.expected,
            loop.kb().fetch(scenario.target_requirement));
      }
      result.adaptations.push_back(std::move(rec));
    }

    result.outcome = (result.adaptations.empty() && result.recoveries.empty())
                         ? "no_adaptation"
                         : "adapted";
  } catch (const std::exception& ex) {
    result.outcome = "error";
    result.error = ex.what();
    log(LogLevel::Error, scenario_id + " replication " + std::to_string(replication) +
                             " failed: " + result.error);
  }
  return result;
}

std::vector<ReplicationResult> run_scenario(const std::string& scenario_id,
                                            int replications,
                                            const RunOptions& options) {
  std::vector<ReplicationResult> results;
  results.reserve(static_cast<std::size_t>(replications));
  for (int r = 0; r < replications; ++r)
    results.push_back(run_replication(scenario_id, r, options));
  return results;
}

}  // namespace sacre::harness
