#pragma once

#include <vector>

#include "sacre/loop/policy.hpp"
#include "sacre/reqmodel/text.hpp"
#include "sacre/reqmodel/types.hpp"

namespace sacre::sim {

// The driver-drowsiness sensor catalog. All thresholds downstream are on the
// normalized scale: hbpm raw 0..120 bpm, hosw raw 0..2 hands.
std::vector<reqmodel::VariableSpec> drowsiness_variables();

// heartBeatsPerMinute <-> hbpm, handsOnSteeringWheel <-> hosw.
reqmodel::AliasMap drowsiness_aliases();

// Initial contextual requirements cr1..cr3 (drowsiness levels 1..3).
std::vector<reqmodel::ContextualRequirement> initial_requirements();

// Policy set used by the simulation harness.
loop::PolicySet default_policies();

}  // namespace sacre::sim
