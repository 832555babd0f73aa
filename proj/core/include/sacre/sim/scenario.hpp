#pragma once

#include <cstdint>
#include <set>

#include "sacre/reqmodel/types.hpp"
#include "sacre/sim/trace.hpp"

namespace sacre::sim {

// SACRE iterations per simulated second; the vehicle ticks at 20.
inline constexpr double kLoopFrequency = 14.28;

struct ScenarioSpec {
  std::string id;
  std::int64_t base_iterations;    // full-length injection point
  std::string target_requirement;  // empty for the sensor scenarios
};

const std::vector<ScenarioSpec>& scenario_catalog();
std::vector<std::string> scenario_ids();

struct GeneratedScenario {
  std::string id;
  std::vector<SensorTraceRow> rows;
  std::vector<DriverAction> actions;
  std::int64_t injection_iteration = 0;  // SACRE iterations
  std::int64_t injection_tick = 0;       // vehicle ticks
  std::vector<reqmodel::ContextualRequirement> initial_requirements;
  std::set<std::string> initially_inactive_variables;
  std::set<std::string> initially_decalibrated;
  std::string target_requirement;
  // Reference operationalization the run is expected to converge to; empty
  // for the sensor scenarios.
  reqmodel::Operationalization expected;
};

// Deterministic for a fixed (id, seed, scale): identical output, byte for
// byte once serialized.
GeneratedScenario generate_scenario(const std::string& id, std::uint64_t seed,
                                    double scale);

}  // namespace sacre::sim
