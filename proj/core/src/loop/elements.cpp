#include "sacre/loop/elements.hpp"

#include <algorithm>

namespace sacre::loop {

std::string role_name(Role r) {
  switch (r) {
    case Role::Monitor: return "Monitor";
    case Role::Analyze: return "Analyze";
    case Role::Plan: return "Plan";
    case Role::Execute: return "Execute";
    case Role::KnowledgeBase: return "KnowledgeBase";
    case Role::Sensors: return "Sensors";
    case Role::Effectors: return "Effectors";
  }
  return "?";
}

ElementHandle& Topology::element(const std::string& id) {
  auto it = elements_.find(id);
  if (it == elements_.end()) throw std::out_of_range("unknown element '" + id + "'");
  return it->second;
}

const ElementHandle& Topology::element(const std::string& id) const {
  auto it = elements_.find(id);
  if (it == elements_.end()) throw std::out_of_range("unknown element '" + id + "'");
  return it->second;
}

std::vector<std::string> Topology::ids_of(Role r) const {
  std::vector<std::string> out;
  for (const auto& [id, e] : elements_)
    if (e.role == r) out.push_back(id);
  std::sort(out.begin(), out.end());
  return out;
}

void Topology::connect(const std::string& producer, const std::string& consumer) {
  element(producer).observers.push_back(consumer);
  element(consumer).observables.push_back(producer);
}

Topology Topology::create(const StructureDescriptor& structure,
                          const std::vector<std::string>& managed_element_ids) {
  const std::pair<Role, int> demanded[] = {
      {Role::Monitor, structure.monitors},   {Role::Analyze, structure.analyzers},
      {Role::Plan, structure.planners},      {Role::Execute, structure.executors},
      {Role::KnowledgeBase, structure.knowledge_bases}};
  for (const auto& [role, count] : demanded)
    if (count < 1)
      throw SetupError("setup refused: structure demands no " + role_name(role) +
                       " element");

  Topology t;
  auto make = [&](Role role, int count, const std::string& policy) {
    for (int i = 0; i < count; ++i) {
      std::string id = role_name(role);
      if (count > 1) id += "-" + std::to_string(i + 1);
      t.elements_.emplace(id, ElementHandle{id, role, ElementState::OK, policy, {}, {}});
    }
  };
  make(Role::Monitor, structure.monitors, "monitor");
  make(Role::Analyze, structure.analyzers, "analyze");
  make(Role::Plan, structure.planners, "plan");
  make(Role::Execute, structure.executors, "execute");
  make(Role::KnowledgeBase, structure.knowledge_bases, "knowledgeBase");
  make(Role::Sensors, 1, "monitor");
  make(Role::Effectors, 1, "execute");

  // Canonical dataflow; one-to-many wiring across role instances.
  auto connect_roles = [&](Role producer, Role consumer) {
    for (const auto& p : t.ids_of(producer))
      for (const auto& c : t.ids_of(consumer)) t.connect(p, c);
  };
  connect_roles(Role::Sensors, Role::Monitor);
  connect_roles(Role::Monitor, Role::Analyze);
  connect_roles(Role::Monitor, Role::KnowledgeBase);
  connect_roles(Role::KnowledgeBase, Role::Analyze);
  connect_roles(Role::Analyze, Role::Plan);
  connect_roles(Role::Plan, Role::Execute);
  connect_roles(Role::Execute, Role::Effectors);

  // Phase 4: Sensors/Effectors observe each managed element.
  for (const auto& me : managed_element_ids) {
    for (const auto& s : t.ids_of(Role::Sensors)) t.element(s).observables.push_back(me);
    for (const auto& e : t.ids_of(Role::Effectors)) t.element(e).observables.push_back(me);
  }
  return t;
}

void Topology::first_notify() const {
  for (const auto& [id, e] : elements_)
    if (e.state != ElementState::OK)
      throw SetupError("setup refused: element '" + id + "' reported NO_OK");
}

std::vector<Role> Topology::unhealthy_roles() const {
  std::vector<Role> missing;
  for (Role r : {Role::Monitor, Role::Analyze, Role::Plan, Role::Execute,
                 Role::KnowledgeBase}) {
    bool ok = false;
    for (const auto& [_, e] : elements_)
      if (e.role == r && e.state == ElementState::OK) { ok = true; break; }
    if (!ok) missing.push_back(r);
  }
  return missing;
}

PlanDecision decide_plan(const RequestForChange& rfc, const PlanPolicy& policy,
                         const ExecutePolicy& execute, std::uint64_t plan_id) {
  rfc.validate();
  if (rfc.measures) {
    const auto& m = *rfc.measures;
    if (m.precision < policy.precision_min) return {std::nullopt, "precision"};
    if (m.recall < policy.recall_min) return {std::nullopt, "recall"};
    if (m.f_measure < policy.fmeasure_min) return {std::nullopt, "fMeasure"};
  }
  if (execute.managed_elements.empty())
    throw std::invalid_argument("execute policy declares no managed element");
  ChangePlan plan;
  plan.id = plan_id;
  plan.rfc_id = rfc.id;
  plan.requirement_id = rfc.requirement_id;
  plan.new_operationalization = rfc.candidate;
  plan.target_managed_element = execute.managed_elements.front();
  return {plan, {}};
}

}  // namespace sacre::loop
