#include "sacre/reqmodel/eval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sacre::reqmodel {

namespace {

bool is_lower_bound(CmpOp op) { return op == CmpOp::Ge || op == CmpOp::Gt; }
bool is_upper_bound(CmpOp op) { return op == CmpOp::Le || op == CmpOp::Lt; }

}  // namespace

Operationalization::Operationalization(std::vector<Conjunction> clauses)
    : clauses_(std::move(clauses)) {
  for (const auto& clause : clauses_) {
    // At most one lower and one upper bound per variable within a clause;
    // duplicate equalities on the same variable are contradictory.
    for (std::size_t i = 0; i < clause.size(); ++i) {
      for (std::size_t j = i + 1; j < clause.size(); ++j) {
        if (clause[i].variable != clause[j].variable) continue;
        const CmpOp a = clause[i].op, b = clause[j].op;
        if (a == CmpOp::Eq || b == CmpOp::Eq)
          throw std::invalid_argument(
              "conflicting conditions on '" + clause[i].variable + "' in one clause");
        if (is_lower_bound(a) && is_lower_bound(b))
          throw std::invalid_argument(
              "two lower bounds on '" + clause[i].variable + "' in one clause");
        if (is_upper_bound(a) && is_upper_bound(b))
          throw std::invalid_argument(
              "two upper bounds on '" + clause[i].variable + "' in one clause");
      }
    }
  }
}

bool Operationalization::references(const std::string& variable) const {
  for (const auto& clause : clauses_)
    for (const auto& cond : clause)
      if (cond.variable == variable) return true;
  return false;
}

CaseKind kind_of(const UncertaintyCase& c) {
  switch (c.index()) {
    case 0: return CaseKind::Case1;
    case 1: return CaseKind::Case2a;
    case 2: return CaseKind::Case2b;
    case 3: return CaseKind::Case2c;
    case 4: return CaseKind::Case3;
    default: return CaseKind::Case4;
  }
}

std::string case_name(CaseKind k) {
  switch (k) {
    case CaseKind::Case1: return "case1";
    case CaseKind::Case2a: return "case2a";
    case CaseKind::Case2b: return "case2b";
    case CaseKind::Case2c: return "case2c";
    case CaseKind::Case3: return "case3";
    default: return "case4";
  }
}

std::string case_variable(const UncertaintyCase& c) {
  if (const auto* a = std::get_if<Case2a_SensorLost>(&c)) return a->variable;
  if (const auto* b = std::get_if<Case2b_SensorDecalibrated>(&c)) return b->variable;
  if (const auto* u = std::get_if<Case2c_SensorUp>(&c)) return u->variable;
  return {};
}

std::string case_requirement(const UncertaintyCase& c) {
  if (const auto* v = std::get_if<Case3_Violation>(&c)) return v->requirement_id;
  if (const auto* w = std::get_if<Case4_PotentiallyWrongContext>(&c))
    return w->requirement_id;
  return {};
}

double normalize_unclamped(double raw, const VariableSpec& spec) {
  return (raw - spec.raw_min) / (spec.raw_max - spec.raw_min);
}

double normalize(double raw, const VariableSpec& spec) {
  return std::clamp(normalize_unclamped(raw, spec), 0.0, 1.0);
}

double preprocess_perclos(std::span<const double> eyes_window, int window_ticks) {
  if (window_ticks <= 0) throw std::invalid_argument("window_ticks must be positive");
  const std::size_t considered =
      std::min(eyes_window.size(), static_cast<std::size_t>(window_ticks));
  if (considered == 0) return 0.0;
  // Only the most recent `considered` samples count.
  std::size_t closed = 0;
  for (std::size_t i = eyes_window.size() - considered; i < eyes_window.size(); ++i)
    if (eyes_window[i] < kEyesClosedThreshold) ++closed;
  return static_cast<double>(closed) / static_cast<double>(considered);
}

bool condition_holds(const AtomicCondition& cond, double value) {
  switch (cond.op) {
    case CmpOp::Ge: return value >= cond.threshold - kEqualityTolerance;
    case CmpOp::Le: return value <= cond.threshold + kEqualityTolerance;
    case CmpOp::Gt: return value > cond.threshold + kEqualityTolerance;
    case CmpOp::Lt: return value < cond.threshold - kEqualityTolerance;
    case CmpOp::Eq: return std::fabs(value - cond.threshold) <= kEqualityTolerance;
  }
  return false;
}

Ternary eval_operationalization(const Operationalization& op,
                                const EnvironmentSnapshot& snapshot,
                                const std::set<std::string>& active_vars) {
  if (op.empty()) return Ternary::Unknown;
  for (const auto& clause : op.clauses())
    for (const auto& cond : clause) {
      if (!active_vars.contains(cond.variable)) return Ternary::Unknown;
      if (!snapshot.value(cond.variable)) return Ternary::Unknown;
    }
  for (const auto& clause : op.clauses()) {
    bool all = true;
    for (const auto& cond : clause) {
      if (!condition_holds(cond, *snapshot.value(cond.variable))) {
        all = false;
        break;
      }
    }
    if (all) return Ternary::True;
  }
  return Ternary::False;
}

SatisfactionVerdict assess_satisfaction(const ContextualRequirement& req,
                                        Ternary ctx_value,
                                        const BehaviorState& beh) {
  if (beh.behavior_id != req.behavior_id)
    throw std::invalid_argument("behavior state '" + beh.behavior_id +
                                "' does not belong to requirement '" + req.id + "'");
  if (ctx_value == Ternary::Unknown) {
    if (req.operationalization.empty())
      return {false, Case1_NoOperationalization{}};
    // Non-empty but unevaluable: sensor-level Case 2 detection owns this.
    return {true, std::nullopt};
  }
  if (ctx_value == Ternary::True && !beh.active)
    return {false, Case3_Violation{req.id}};
  if (ctx_value == Ternary::False && beh.active)
    return {false, Case4_PotentiallyWrongContext{req.id}};
  return {true, std::nullopt};
}

AnomalyResult detect_sensor_anomaly(const VariableSpec& spec,
                                    const EnvironmentSnapshot& snapshot,
                                    SensorStatus prior_status) {
  const auto value = snapshot.preclamp_value(spec.name);
  if (!value) return {Case2a_SensorLost{spec.name}, SensorStatus::Lost};
  if (*value < spec.valid_min || *value > spec.valid_max)
    return {Case2b_SensorDecalibrated{spec.name}, SensorStatus::Decalibrated};
  if (prior_status != SensorStatus::Healthy)
    return {Case2c_SensorUp{spec.name}, SensorStatus::Healthy};
  return {std::nullopt, SensorStatus::Healthy};
}

Operationalization strip_variable(const Operationalization& op,
                                  const std::string& variable) {
  std::vector<Conjunction> clauses;
  for (const auto& clause : op.clauses()) {
    Conjunction kept;
    for (const auto& cond : clause)
      if (cond.variable != variable) kept.push_back(cond);
    if (!kept.empty()) clauses.push_back(std::move(kept));
  }
  return Operationalization(std::move(clauses));
}

}  // namespace sacre::reqmodel
