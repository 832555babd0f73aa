#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>

#include "sacre/reqmodel/types.hpp"

namespace sacre::reqmodel {

// Tolerance used when comparing continuous variables for equality. Discrete
// variables (facePosition, hosw) live on an exact normalized grid, which this
// tolerance does not disturb.
inline constexpr double kEqualityTolerance = 1e-9;

// Eyes-state samples below this fraction count as "pupils closed" for perclos.
inline constexpr double kEyesClosedThreshold = 0.20;

// Linear min-max normalization without clamping. Anomaly detection operates
// on this intermediate.
double normalize_unclamped(double raw, const VariableSpec& spec);

// Clamped normalization: clamp((raw - raw_min) / (raw_max - raw_min), 0, 1).
double normalize(double raw, const VariableSpec& spec);

// Fraction of the most recent window that was below the closed-eyes
// threshold. Empty windows yield 0.
double preprocess_perclos(std::span<const double> eyes_window, int window_ticks);

bool condition_holds(const AtomicCondition& cond, double value);

// True iff any clause holds. Unknown when the operationalization is empty or
// any referenced variable is inactive or absent from the snapshot.
Ternary eval_operationalization(const Operationalization& op,
                                const EnvironmentSnapshot& snapshot,
                                const std::set<std::string>& active_vars);

struct SatisfactionVerdict {
  bool satisfied = true;                   // context/behavior agree (or suppressed Unknown)
  std::optional<UncertaintyCase> uncertainty;  // set when dissatisfied
};

// Table 2 requirement-level assessment. Throws on behavior id mismatch.
SatisfactionVerdict assess_satisfaction(const ContextualRequirement& req,
                                        Ternary ctx_value,
                                        const BehaviorState& beh);

struct AnomalyResult {
  std::optional<UncertaintyCase> uncertainty;
  SensorStatus status = SensorStatus::Healthy;
};

// Sensor-level status machine over the un-clamped normalized value.
AnomalyResult detect_sensor_anomaly(const VariableSpec& spec,
                                    const EnvironmentSnapshot& snapshot,
                                    SensorStatus prior_status);

// Removes every condition on `variable`; clauses emptied by the removal are
// dropped, possibly leaving the empty (Case 1) operationalization.
Operationalization strip_variable(const Operationalization& op,
                                  const std::string& variable);

}  // namespace sacre::reqmodel
