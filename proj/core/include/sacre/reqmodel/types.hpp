#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace sacre::reqmodel {

// Preprocessing attached to a monitored variable. perclos is derived from a
// sliding window over the raw eyes-state signal; everything else passes
// through untouched.
struct Preprocessing {
  enum class Kind { None, PerclosWindow };
  Kind kind = Kind::None;
  int window_ticks = 0;  // only meaningful for PerclosWindow

  static Preprocessing none() { return {Kind::None, 0}; }
  static Preprocessing perclos_window(int ticks) {
    if (ticks <= 0) throw std::invalid_argument("perclos window must be positive");
    return {Kind::PerclosWindow, ticks};
  }
};

// Specification of one monitored sensor variable: raw-unit normalization
// bounds and validity thresholds on the normalized value.
struct VariableSpec {
  std::string name;
  double raw_min = 0.0;
  double raw_max = 1.0;
  double valid_min = 0.0;  // anomaly thresholds, normalized scale
  double valid_max = 1.0;
  Preprocessing preprocessing = Preprocessing::none();

  VariableSpec() = default;
  VariableSpec(std::string n, double rmin, double rmax, double vmin, double vmax,
               Preprocessing prep = Preprocessing::none())
      : name(std::move(n)), raw_min(rmin), raw_max(rmax), valid_min(vmin),
        valid_max(vmax), preprocessing(prep) {
    if (!(raw_min < raw_max)) throw std::invalid_argument("raw_min must be < raw_max");
    if (!(0.0 <= valid_min && valid_min <= valid_max && valid_max <= 1.0))
      throw std::invalid_argument("validity thresholds must satisfy 0 <= min <= max <= 1");
  }
};

// One simulated-time sample of the environment. A variable missing from
// `values` means its sensor is lost. `values` holds normalized, clamped
// readings; `preclamp` keeps the clamp-free normalized intermediate that
// anomaly detection inspects.
struct EnvironmentSnapshot {
  std::int64_t tick = 0;
  std::map<std::string, double> values;
  std::map<std::string, double> preclamp;

  std::optional<double> value(const std::string& var) const {
    auto it = values.find(var);
    if (it == values.end()) return std::nullopt;
    return it->second;
  }
  std::optional<double> preclamp_value(const std::string& var) const {
    auto it = preclamp.find(var);
    if (it != preclamp.end()) return it->second;
    return value(var);
  }
};

enum class CmpOp { Ge, Le, Gt, Lt, Eq };

// Atomic threshold condition over one normalized variable.
struct AtomicCondition {
  std::string variable;
  CmpOp op = CmpOp::Ge;
  double threshold = 0.0;

  bool operator==(const AtomicCondition&) const = default;
};

using Conjunction = std::vector<AtomicCondition>;

// DNF over atomic conditions. No clauses = "not operationalized" (Case 1).
class Operationalization {
 public:
  Operationalization() = default;
  explicit Operationalization(std::vector<Conjunction> clauses);

  bool empty() const { return clauses_.empty(); }
  const std::vector<Conjunction>& clauses() const { return clauses_; }

  bool references(const std::string& variable) const;

  bool operator==(const Operationalization&) const = default;

 private:
  std::vector<Conjunction> clauses_;
};

struct ContextualRequirement {
  std::string id;
  std::string context_label;
  Operationalization operationalization;
  std::string behavior_id;
};

struct BehaviorState {
  std::string behavior_id;
  bool active = false;
  bool driver_disabled = false;

  BehaviorState() = default;
  BehaviorState(std::string id, bool act, bool disabled)
      : behavior_id(std::move(id)), active(act), driver_disabled(disabled) {
    if (driver_disabled && active)
      throw std::invalid_argument("a driver-disabled behavior cannot be active");
  }
};

// --- Uncertainty taxonomy ---------------------------------------------------

struct Case1_NoOperationalization {
  bool operator==(const Case1_NoOperationalization&) const = default;
};
struct Case2a_SensorLost {
  std::string variable;
  bool operator==(const Case2a_SensorLost&) const = default;
};
struct Case2b_SensorDecalibrated {
  std::string variable;
  bool operator==(const Case2b_SensorDecalibrated&) const = default;
};
struct Case2c_SensorUp {
  std::string variable;
  bool operator==(const Case2c_SensorUp&) const = default;
};
struct Case3_Violation {
  std::string requirement_id;
  bool operator==(const Case3_Violation&) const = default;
};
struct Case4_PotentiallyWrongContext {
  std::string requirement_id;
  bool operator==(const Case4_PotentiallyWrongContext&) const = default;
};

using UncertaintyCase =
    std::variant<Case1_NoOperationalization, Case2a_SensorLost,
                 Case2b_SensorDecalibrated, Case2c_SensorUp, Case3_Violation,
                 Case4_PotentiallyWrongContext>;

enum class CaseKind { Case1, Case2a, Case2b, Case2c, Case3, Case4 };

CaseKind kind_of(const UncertaintyCase& c);
std::string case_name(CaseKind k);

// Variable named by a sensor-level case, empty otherwise.
std::string case_variable(const UncertaintyCase& c);
// Requirement named by a requirement-level case, empty otherwise.
std::string case_requirement(const UncertaintyCase& c);

// Whether an adaptation triggered by this case goes through the learner.
inline bool is_mined_case(CaseKind k) {
  return k == CaseKind::Case1 || k == CaseKind::Case3 || k == CaseKind::Case4;
}

enum class Ternary { False, True, Unknown };

enum class SensorStatus { Healthy, Lost, Decalibrated };

}  // namespace sacre::reqmodel
