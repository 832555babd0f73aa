#pragma once

#include <deque>
#include <map>
#include <mutex>

#include "sacre/loop/loop.hpp"
#include "sacre/sim/trace.hpp"

namespace sacre::sim {

enum class OverrideState { None, TurnedOff, Disabled, TurnedOn };

// Driver override lattice for one actuator. Disabled and TurnedOn are sticky
// until the matching enable/turn_off; None defers to the context.
class Actuator {
 public:
  explicit Actuator(std::string id) : id_(std::move(id)) {}

  const std::string& id() const { return id_; }
  OverrideState state() const { return state_; }

  void apply(const std::string& action);
  bool active(bool context_true) const;
  bool driver_disabled() const { return state_ == OverrideState::Disabled; }

 private:
  std::string id_;
  OverrideState state_ = OverrideState::None;
};

// The managed element: replays a sensor trace at 20 ticks per simulated
// second, derives perclos over a sliding window, drives its actuators from
// the current operationalizations plus driver overrides, and applies change
// plans at the next tick boundary.
class SmartVehicle : public loop::ManagedElement {
 public:
  static constexpr double kTicksPerSecond = 20.0;

  SmartVehicle(std::vector<reqmodel::VariableSpec> variables,
               std::vector<reqmodel::ContextualRequirement> requirements,
               std::vector<SensorTraceRow> trace, std::vector<DriverAction> actions);

  std::string id() const override { return "smart_vehicle"; }
  std::vector<reqmodel::ContextualRequirement> requirements() const override;
  void apply_adaptation(const loop::ChangePlan& plan) override;

  struct TickResult {
    reqmodel::EnvironmentSnapshot snapshot;
    std::vector<reqmodel::BehaviorState> behaviors;
  };

  bool finished() const { return next_row_ >= trace_.size(); }
  std::int64_t current_tick() const;  // tick of the last produced sample
  TickResult tick();
  const TickResult& latest() const;

 private:
  std::vector<reqmodel::VariableSpec> variables_;
  std::vector<SensorTraceRow> trace_;
  std::vector<DriverAction> actions_;
  std::size_t next_row_ = 0;
  std::size_t next_action_ = 0;
  std::deque<double> eyes_window_;
  int perclos_window_ticks_ = 60;
  std::map<std::string, Actuator> actuators_;  // keyed by behavior id

  mutable std::mutex mutex_;  // requirements + adaptation mailbox
  std::vector<reqmodel::ContextualRequirement> requirements_;
  std::vector<loop::ChangePlan> mailbox_;

  std::optional<TickResult> latest_;
};

}  // namespace sacre::sim
