#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sacre/loop/messages.hpp"
#include "sacre/loop/policy.hpp"

namespace sacre::loop {

enum class Role { Monitor, Analyze, Plan, Execute, KnowledgeBase, Sensors, Effectors };

std::string role_name(Role r);

enum class ElementState { OK, NO_OK };

// Health/topology handle for one loop element (the HIIC view). The
// operational behavior lives in the Loop; handles carry identity, policy
// assignment, health state, and the observer wiring.
struct ElementHandle {
  std::string id;
  Role role;
  ElementState state = ElementState::OK;
  std::string policy_ref;
  std::vector<std::string> observers;    // elements consuming from this one
  std::vector<std::string> observables;  // elements this one consumes from
};

struct SetupError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Element graph built by the Fig-5 setup choreography.
class Topology {
 public:
  // Phase 1+2: create elements per the structure and wire observer
  // attachments along the canonical dataflow. Throws SetupError naming the
  // missing role when the structure is incomplete.
  static Topology create(const StructureDescriptor& structure,
                         const std::vector<std::string>& managed_element_ids);

  const std::map<std::string, ElementHandle>& elements() const { return elements_; }
  ElementHandle& element(const std::string& id);
  const ElementHandle& element(const std::string& id) const;

  std::vector<std::string> ids_of(Role r) const;

  // Phase 3: broadcast health notify; throws SetupError naming the first
  // NO_OK element.
  void first_notify() const;

  // OK iff every loop role has >= 1 OK element. Returns the missing roles.
  std::vector<Role> unhealthy_roles() const;

 private:
  void connect(const std::string& producer, const std::string& consumer);
  std::map<std::string, ElementHandle> elements_;
};

// Plan element decision logic: mined RFCs pass the measure thresholds, Case 2
// RFCs pass unconditionally.
struct PlanDecision {
  std::optional<ChangePlan> plan;
  std::string failing_measure;  // set on rejection
};

PlanDecision decide_plan(const RequestForChange& rfc, const PlanPolicy& policy,
                         const ExecutePolicy& execute, std::uint64_t plan_id);

}  // namespace sacre::loop
