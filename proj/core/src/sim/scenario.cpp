#include "sacre/sim/scenario.hpp"

#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>

#include "sacre/reqmodel/eval.hpp"
#include "sacre/sim/catalog.hpp"
#include "sacre/sim/vehicle.hpp"

namespace sacre::sim {

namespace {

using reqmodel::CmpOp;
using reqmodel::Conjunction;
using reqmodel::Operationalization;

// Sensor targets for one driving regime. perclos is produced indirectly: the
// eyes-state signal carries `duty` closed ticks per 60, so a full window
// settles at exactly duty/60.
struct Targets {
  int duty;
  double face;    // raw facePosition
  double hbpm_n;  // normalized heart rate, jittered per tick
  double hosw;    // raw hands count
};

constexpr Targets kCruise{2, 1.0, 0.65, 2.0};
constexpr int kHoldTicks = 40;
constexpr int kGapTicks = 30;
constexpr double kHbpmJitter = 0.012;

class TraceBuilder {
 public:
  explicit TraceBuilder(std::uint64_t seed) : rng_(seed) {}

  std::int64_t next_tick() const { return static_cast<std::int64_t>(rows_.size()); }

  void emit(const Targets& t) {
    SensorTraceRow r;
    r.tick = next_tick();
    acc_ += t.duty;
    bool closed = false;
    if (acc_ >= 60) {
      acc_ -= 60;
      closed = true;
    }
    r.eyes_state = closed ? 0.05 : 0.8;
    window_.push_back(closed);
    if (window_.size() > 60) {
      if (window_.front()) --count_;
      window_.pop_front();
    }
    if (closed) ++count_;
    std::uniform_real_distribution<double> jitter(-kHbpmJitter, kHbpmJitter);
    r.face_position = t.face;
    r.hbpm = (t.hbpm_n + jitter(rng_)) * 120.0;
    r.hosw = t.hosw;
    rows_.push_back(r);
  }

  void emit_n(const Targets& t, int n) {
    for (int i = 0; i < n; ++i) emit(t);
  }

  void emit_until(const Targets& t, std::int64_t end_tick) {
    while (next_tick() < end_tick) emit(t);
  }

  // Runs the duty cycle until the closed-tick count settles at t.duty.
  void emit_until_settled(const Targets& t) {
    for (int i = 0; i < 300; ++i) {
      if (count_ == t.duty && static_cast<int>(window_.size()) >= 60) return;
      emit(t);
    }
    throw std::logic_error("perclos failed to settle");
  }

  void action(const std::string& actuator, const std::string& what) {
    actions_.push_back({next_tick(), actuator, what});
  }

  // One drowsiness episode: sensors jump to the episode regime, perclos ramps
  // to the target and holds, then decays back before the regime is released.
  void episode(const Targets& t, const std::string& actuator = {},
               const std::string& engage = {}, const std::string& release = {}) {
    if (!actuator.empty()) action(actuator, engage);
    emit_until_settled(t);
    emit_n(t, kHoldTicks);
    Targets decay = t;
    decay.duty = kCruise.duty;
    emit_until_settled(decay);
    if (!actuator.empty()) action(actuator, release);
    emit_n(kCruise, kGapTicks);
  }

  std::vector<SensorTraceRow> rows_;
  std::vector<DriverAction> actions_;

 private:
  std::mt19937_64 rng_;
  std::deque<bool> window_;
  int count_ = 0;
  int acc_ = 0;
};

Operationalization with_condition(const Operationalization& op,
                                 const reqmodel::AtomicCondition& extra) {
  auto clauses = op.clauses();
  for (auto& clause : clauses) clause.push_back(extra);
  return Operationalization(std::move(clauses));
}

Operationalization replace_condition(const Operationalization& op,
                                     const std::string& variable,
                                     const reqmodel::AtomicCondition& with) {
  auto clauses = op.clauses();
  for (auto& clause : clauses)
    for (auto& cond : clause)
      if (cond.variable == variable) cond = with;
  return Operationalization(std::move(clauses));
}

}  // namespace

const std::vector<ScenarioSpec>& scenario_catalog() {
  static const std::vector<ScenarioSpec> specs = {
      {"us1", 1000, "cr1"},  {"us2", 15000, "cr2"}, {"us3", 30000, "cr3"},
      {"us4a", 45000, ""},   {"us4b", 60000, ""},   {"us5", 75000, "cr3"},
  };
  return specs;
}

std::vector<std::string> scenario_ids() {
  std::vector<std::string> ids;
  for (const auto& s : scenario_catalog()) ids.push_back(s.id);
  return ids;
}

GeneratedScenario generate_scenario(const std::string& id, std::uint64_t seed,
                                    double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");
  const ScenarioSpec* spec = nullptr;
  for (const auto& s : scenario_catalog())
    if (s.id == id) spec = &s;
  if (!spec) throw std::invalid_argument("unknown scenario '" + id + "'");

  GeneratedScenario out;
  out.id = id;
  out.target_requirement = spec->target_requirement;
  out.initial_requirements = initial_requirements();
  out.injection_iteration =
      static_cast<std::int64_t>(std::llround(spec->base_iterations * scale));
  out.injection_tick = static_cast<std::int64_t>(std::floor(
      out.injection_iteration * SmartVehicle::kTicksPerSecond / kLoopFrequency));

  const std::string hbpm = "heartBeatsPerMinute";
  const std::string hosw = "handsOnSteeringWheel";
  const auto& cr1_op = out.initial_requirements[0].operationalization;
  const auto& cr2_op = out.initial_requirements[1].operationalization;
  const auto& cr3_op = out.initial_requirements[2].operationalization;

  TraceBuilder b(seed);

  if (id == "us1") {
    const Targets accepted{15, 1.0, 0.58, 2.0};
    const Targets disabled{15, 0.0, 0.58, 2.0};
    b.emit_until(kCruise, out.injection_tick);
    b.episode(accepted);
    b.episode(accepted);
    b.episode(disabled, "seat_vibration", "disable", "enable");
    b.episode(accepted);
    b.emit_n(kCruise, 100);
    out.expected = with_condition(cr1_op, {"facePosition", CmpOp::Eq, 1.0});
  } else if (id == "us2") {
    const Targets accepted{16, 1.0, 0.50, 1.0};
    const Targets disabled{16, 1.0, 0.50, 2.0};
    b.emit_until(kCruise, out.injection_tick);
    b.episode(accepted);
    b.episode(accepted);
    b.episode(disabled, "sound_light", "disable", "enable");
    b.episode(accepted);
    b.emit_n(kCruise, 100);
    out.expected = with_condition(cr2_op, {hosw, CmpOp::Eq, 0.5});
  } else if (id == "us3") {
    const Targets accepted{22, 1.0, 0.40, 0.0};
    const Targets disabled{22, 1.0, 0.40, 1.0};
    b.emit_until(kCruise, out.injection_tick);
    b.episode(accepted);
    b.episode(accepted);
    b.episode(disabled, "lane_keeping", "disable", "enable");
    b.episode(accepted);
    b.emit_n(kCruise, 100);
    out.expected = replace_condition(cr3_op, hosw, {hosw, CmpOp::Eq, 0.0});
  } else if (id == "us4a") {
    Targets off_center = kCruise;
    off_center.face = 1.4;
    b.emit_until(kCruise, out.injection_tick);
    b.emit_n(off_center, 300);
  } else if (id == "us4b") {
    Targets off_center = kCruise;
    off_center.face = 1.4;
    b.emit_until(off_center, out.injection_tick);
    b.emit_n(kCruise, 300);
    out.initial_requirements[1].operationalization =
        reqmodel::strip_variable(cr2_op, "facePosition");
    out.initial_requirements[2].operationalization =
        reqmodel::strip_variable(cr3_op, "facePosition");
    out.initially_inactive_variables = {"facePosition"};
    out.initially_decalibrated = {"facePosition"};
  } else {  // us5
    const Targets signature{1, 0.0, 0.65, 1.0};
    b.emit_until(kCruise, out.injection_tick);
    b.episode(signature, "lane_keeping", "turn_on", "turn_off");
    b.episode(signature, "lane_keeping", "turn_on", "turn_off");
    b.episode(signature, "lane_keeping", "turn_on", "turn_off");
    b.emit_n(kCruise, 100);
    out.expected = Operationalization{{Conjunction{
        {"perclos", CmpOp::Lt, 0.05},
        {"facePosition", CmpOp::Eq, 0.0},
        {hbpm, CmpOp::Ge, 0.56},
        {hbpm, CmpOp::Le, 0.75},
    }}};
  }

  out.rows = std::move(b.rows_);
  out.actions = std::move(b.actions_);
  validate_trace(out.rows);
  validate_actions(out.actions);
  return out;
}

}  // namespace sacre::sim
