#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sacre::sim {

// One vehicle tick of raw sensor readings. A missing field means the sensor
// produced nothing that tick (lost). Units are raw: eyesState/facePosition in
// [0, 1] nominally, hbpm in beats per minute, hosw in {0, 1, 2}.
struct SensorTraceRow {
  std::int64_t tick = 0;
  std::optional<double> eyes_state;
  std::optional<double> face_position;
  std::optional<double> hbpm;
  std::optional<double> hosw;

  bool operator==(const SensorTraceRow&) const = default;
};

struct DriverAction {
  std::int64_t tick = 0;
  std::string actuator_id;  // seat_vibration | sound_light | lane_keeping
  std::string action;       // turn_on | turn_off | disable | enable

  bool operator==(const DriverAction&) const = default;
};

struct TraceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ticks must start at 0 and increase by exactly 1.
void validate_trace(const std::vector<SensorTraceRow>& rows);
// Actions must be tick-sorted, name a known actuator, and only lane_keeping
// accepts turn_on/turn_off.
void validate_actions(const std::vector<DriverAction>& actions);

// CSV, LF line endings, '.' decimals, empty field = absent reading.
// Header: tick,eyesState,facePosition,hbpm,hosw
void write_trace_csv(const std::vector<SensorTraceRow>& rows, const std::string& path);
std::vector<SensorTraceRow> read_trace_csv(const std::string& path);

// Header: tick,actuator,action
void write_actions_csv(const std::vector<DriverAction>& actions,
                       const std::string& path);
std::vector<DriverAction> read_actions_csv(const std::string& path);

}  // namespace sacre::sim
