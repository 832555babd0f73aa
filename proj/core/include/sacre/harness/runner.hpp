#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "sacre/sim/scenario.hpp"

namespace sacre::harness {

// One enacted change plan, flattened for reporting. precision/recall/
// f_measure are -1 for the sensor-driven (case 2) plans, agreement is -1 when
// the scenario carries no reference operationalization.
struct AdaptationRecord {
  std::string scenario_id;
  int replication = 0;
  std::string requirement_id;
  std::string kind;
  double response_ms = 0.0;
  double precision = -1.0;
  double recall = -1.0;
  double f_measure = -1.0;
  double agreement = -1.0;
  std::size_t dataset_rows = 0;
  std::int64_t iteration = 0;
  std::string operationalization;
};

struct Case2Record {
  std::string variable;
  double response_ms = 0.0;
  std::int64_t iteration = 0;
};

struct ReplicationResult {
  std::string scenario_id;
  int replication = 0;
  std::string outcome;  // adapted | no_adaptation | error
  std::string error;
  std::vector<AdaptationRecord> adaptations;
  std::vector<Case2Record> recoveries;
  std::int64_t iterations = 0;
  std::uint64_t learner_calls = 0;
  std::uint64_t change_plans = 0;
  std::int64_t injection_iteration = 0;
  std::int64_t first_sensor_symptom_iteration = -1;
  bool pre_injection_dissatisfaction = false;
};

struct RunOptions {
  double scale = 0.1;
  std::uint64_t seed = 42;
  bool realtime = false;
  // Upper bound on the per-iteration wait for the analyze stage to drain.
  // One loop period (1/14.28 s) keeps the desk-scale run faithful to the
  // paper's timing: a symptom raised in iteration i is analyzed before i+1.
  std::chrono::microseconds quiescent_cap{70000};
};

// Generates the scenario for (seed + replication), replays it through a fresh
// loop, and collects the outcome. Never throws; failures land in
// outcome == "error".
ReplicationResult run_replication(const std::string& scenario_id, int replication,
                                  const RunOptions& options);

std::vector<ReplicationResult> run_scenario(const std::string& scenario_id,
                                            int replications,
                                            const RunOptions& options);

}  // namespace sacre::harness
