#include "sacre/sim/vehicle.hpp"

#include <stdexcept>

namespace sacre::sim {

void Actuator::apply(const std::string& action) {
  if (action == "turn_on") state_ = OverrideState::TurnedOn;
  else if (action == "turn_off") state_ = OverrideState::TurnedOff;
  else if (action == "disable") state_ = OverrideState::Disabled;
  else if (action == "enable") state_ = OverrideState::None;
  else throw std::invalid_argument("unknown driver action '" + action + "'");
}

bool Actuator::active(bool context_true) const {
  switch (state_) {
    case OverrideState::Disabled: return false;
    case OverrideState::TurnedOn: return true;
    case OverrideState::TurnedOff: return false;
    case OverrideState::None: return context_true;
  }
  return false;
}

SmartVehicle::SmartVehicle(std::vector<reqmodel::VariableSpec> variables,
                           std::vector<reqmodel::ContextualRequirement> requirements,
                           std::vector<SensorTraceRow> trace,
                           std::vector<DriverAction> actions)
    : variables_(std::move(variables)),
      trace_(std::move(trace)),
      actions_(std::move(actions)),
      requirements_(std::move(requirements)) {
  validate_trace(trace_);
  validate_actions(actions_);
  for (const auto& v : variables_)
    if (v.preprocessing.kind == reqmodel::Preprocessing::Kind::PerclosWindow)
      perclos_window_ticks_ = v.preprocessing.window_ticks;
  for (const auto& r : requirements_)
    actuators_.emplace(r.behavior_id, Actuator(r.behavior_id));
}

std::vector<reqmodel::ContextualRequirement> SmartVehicle::requirements() const {
  std::lock_guard lock(mutex_);
  return requirements_;
}

void SmartVehicle::apply_adaptation(const loop::ChangePlan& plan) {
  std::lock_guard lock(mutex_);
  bool known = false;
  for (const auto& r : requirements_)
    if (r.id == plan.requirement_id) known = true;
  if (!known)
    throw std::invalid_argument("change plan names unknown requirement '" +
                                plan.requirement_id + "'");
  mailbox_.push_back(plan);
}

std::int64_t SmartVehicle::current_tick() const {
  return static_cast<std::int64_t>(next_row_) - 1;
}

const SmartVehicle::TickResult& SmartVehicle::latest() const {
  if (!latest_) throw std::logic_error("vehicle has not ticked yet");
  return *latest_;
}

SmartVehicle::TickResult SmartVehicle::tick() {
  if (finished()) throw std::logic_error("trace exhausted");

  std::vector<reqmodel::ContextualRequirement> reqs;
  {
    std::lock_guard lock(mutex_);
    for (const auto& plan : mailbox_)
      for (auto& r : requirements_)
        if (r.id == plan.requirement_id)
          r.operationalization = plan.new_operationalization;
    mailbox_.clear();
    reqs = requirements_;
  }

  const auto& row = trace_[next_row_++];
  while (next_action_ < actions_.size() && actions_[next_action_].tick == row.tick) {
    const auto& a = actions_[next_action_++];
    auto it = actuators_.find(a.actuator_id);
    if (it == actuators_.end())
      throw std::invalid_argument("action targets unknown actuator '" +
                                  a.actuator_id + "'");
    it->second.apply(a.action);
  }

  TickResult result;
  result.snapshot.tick = row.tick;
  std::set<std::string> present;

  auto put = [&](const std::string& name, std::optional<double> raw) {
    if (!raw) return;
    for (const auto& spec : variables_) {
      if (spec.name != name) continue;
      result.snapshot.values[name] = reqmodel::normalize(*raw, spec);
      result.snapshot.preclamp[name] = reqmodel::normalize_unclamped(*raw, spec);
      present.insert(name);
      return;
    }
  };

  if (row.eyes_state) {
    eyes_window_.push_back(*row.eyes_state);
    while (eyes_window_.size() > static_cast<std::size_t>(perclos_window_ticks_))
      eyes_window_.pop_front();
    std::vector<double> window(eyes_window_.begin(), eyes_window_.end());
    put("perclos", reqmodel::preprocess_perclos(window, perclos_window_ticks_));
  }
  put("facePosition", row.face_position);
  put("heartBeatsPerMinute", row.hbpm);
  put("handsOnSteeringWheel", row.hosw);

  for (const auto& req : reqs) {
    const auto ctx = reqmodel::eval_operationalization(req.operationalization,
                                                       result.snapshot, present);
    auto& actuator = actuators_.at(req.behavior_id);
    const bool active = actuator.active(ctx == reqmodel::Ternary::True);
    result.behaviors.emplace_back(req.behavior_id, active, actuator.driver_disabled());
  }

  latest_ = result;
  return result;
}

}  // namespace sacre::sim
