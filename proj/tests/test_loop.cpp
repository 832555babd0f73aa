#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "sacre/loop/loop.hpp"
#include "sacre/sim/catalog.hpp"

using namespace sacre::loop;
using namespace sacre::reqmodel;

namespace {

EnvironmentSnapshot snap(std::int64_t tick, std::map<std::string, double> values,
                         std::map<std::string, double> preclamp = {}) {
  EnvironmentSnapshot s;
  s.tick = tick;
  s.preclamp = preclamp.empty() ? values : std::move(preclamp);
  s.values = std::move(values);
  return s;
}

std::map<std::string, double> cruise_values() {
  return {{"perclos", 0.02},
          {"facePosition", 1.0},
          {"heartBeatsPerMinute", 0.65},
          {"handsOnSteeringWheel", 1.0}};
}

std::map<std::string, double> ctx1_values() {
  return {{"perclos", 0.20},
          {"facePosition", 1.0},
          {"heartBeatsPerMinute", 0.58},
          {"handsOnSteeringWheel", 1.0}};
}

std::vector<BehaviorState> behaviors(bool vib_active, bool vib_disabled = false,
                                     bool sound_active = false,
                                     bool lane_active = false) {
  return {BehaviorState{"seat_vibration", vib_active, vib_disabled},
          BehaviorState{"sound_light", sound_active, false},
          BehaviorState{"lane_keeping", lane_active, false}};
}

class StubManaged : public ManagedElement {
 public:
  StubManaged() : requirements_(sacre::sim::initial_requirements()) {}

  std::string id() const override { return "smart_vehicle"; }
  std::vector<ContextualRequirement> requirements() const override {
    return requirements_;
  }
  void apply_adaptation(const ChangePlan& plan) override {
    applied.push_back(plan);
    for (auto& r : requirements_)
      if (r.id == plan.requirement_id)
        r.operationalization = plan.new_operationalization;
  }

  std::vector<ChangePlan> applied;

 private:
  std::vector<ContextualRequirement> requirements_;
};

}  // namespace

TEST_CASE("policy validation rejects broken sets") {
  auto ps = sacre::sim::default_policies();
  CHECK_NOTHROW(ps.validate());

  auto missing = ps;
  missing.manager.structure.planners = 0;
  CHECK_THROWS_AS(missing.validate(), std::invalid_argument);

  auto bad_threshold = ps;
  bad_threshold.plan.precision_min = 1.5;
  CHECK_THROWS_AS(bad_threshold.validate(), std::invalid_argument);

  auto bad_input = ps;
  bad_input.analyze.input_variables.push_back("unknownVar");
  CHECK_THROWS_AS(bad_input.validate(), std::invalid_argument);

  auto no_managed = ps;
  no_managed.execute.managed_elements.clear();
  CHECK_THROWS_AS(no_managed.validate(), std::invalid_argument);

  auto bad_freq = ps;
  bad_freq.knowledge_base.frequency = 0.0;
  CHECK_THROWS_AS(bad_freq.validate(), std::invalid_argument);
}

TEST_CASE("policy files round trip and match the shipped config") {
  namespace fs = std::filesystem;
  auto ps = sacre::sim::default_policies();
  auto dir = fs::temp_directory_path() / "sacre_policy_test";
  fs::create_directories(dir);
  save_policy_set(ps, dir.string());
  auto back = load_policy_set((dir / "manager.properties").string());

  CHECK(back.knowledge_base.frequency == ps.knowledge_base.frequency);
  CHECK(back.knowledge_base.min_uncertainty_iterations ==
        ps.knowledge_base.min_uncertainty_iterations);
  CHECK(back.knowledge_base.persist_variables == ps.knowledge_base.persist_variables);
  CHECK(back.analyze.min_analysis_iterations == ps.analyze.min_analysis_iterations);
  CHECK(back.analyze.input_variables == ps.analyze.input_variables);
  CHECK(back.plan.precision_min == ps.plan.precision_min);
  CHECK(back.execute.managed_elements == ps.execute.managed_elements);
  REQUIRE(back.monitor.variables.size() == ps.monitor.variables.size());
  for (std::size_t i = 0; i < ps.monitor.variables.size(); ++i) {
    CHECK(back.monitor.variables[i].name == ps.monitor.variables[i].name);
    CHECK(back.monitor.variables[i].raw_max == ps.monitor.variables[i].raw_max);
    CHECK(back.monitor.variables[i].valid_min == ps.monitor.variables[i].valid_min);
    CHECK(back.monitor.variables[i].preprocessing.window_ticks ==
          ps.monitor.variables[i].preprocessing.window_ticks);
  }

  // The repository config directory describes the same policy set.
  fs::path shipped = fs::path(__FILE__).parent_path().parent_path() / "config";
  if (fs::exists(shipped / "manager.properties")) {
    auto cfg = load_policy_set((shipped / "manager.properties").string());
    CHECK(cfg.knowledge_base.frequency == ps.knowledge_base.frequency);
    CHECK(cfg.knowledge_base.min_uncertainty_iterations ==
          ps.knowledge_base.min_uncertainty_iterations);
    CHECK(cfg.analyze.min_analysis_iterations == ps.analyze.min_analysis_iterations);
    CHECK(cfg.plan.precision_min == ps.plan.precision_min);
    CHECK(cfg.monitor.variables.size() == ps.monitor.variables.size());
  }
}

TEST_CASE("topology setup wires the default structure") {
  StructureDescriptor structure;
  auto topo = Topology::create(structure, {"smart_vehicle"});
  CHECK(topo.elements().size() == 7);
  CHECK_NOTHROW(topo.first_notify());
  CHECK(topo.unhealthy_roles().empty());

  // Observer completeness: every consumer appears in its producer's list.
  for (const auto& [id, handle] : topo.elements()) {
    for (const auto& obs : handle.observables) {
      // Managed-element ids show up as observables but are not loop elements.
      if (!topo.elements().contains(obs)) continue;
      const auto& producer = topo.element(obs);
      bool found = false;
      for (const auto& o : producer.observers) found |= o == id;
      CHECK(found);
    }
  }
}

TEST_CASE("topology refuses incomplete structures naming the role") {
  StructureDescriptor no_plan;
  no_plan.planners = 0;
  try {
    Topology::create(no_plan, {"smart_vehicle"});
    FAIL("expected SetupError");
  } catch (const SetupError& e) {
    CHECK(std::string(e.what()).find("Plan") != std::string::npos);
  }

  StructureDescriptor no_kb;
  no_kb.knowledge_bases = 0;
  CHECK_THROWS_AS(Topology::create(no_kb, {"smart_vehicle"}), SetupError);
}

TEST_CASE("two monitors both wire to the single analyze") {
  StructureDescriptor structure;
  structure.monitors = 2;
  auto topo = Topology::create(structure, {"smart_vehicle"});
  auto monitors = topo.ids_of(Role::Monitor);
  auto analyzers = topo.ids_of(Role::Analyze);
  REQUIRE(monitors.size() == 2);
  REQUIRE(analyzers.size() == 1);
  for (const auto& m : monitors) {
    bool wired = false;
    for (const auto& o : topo.element(m).observers) wired |= o == analyzers[0];
    CHECK(wired);
  }
}

TEST_CASE("first_notify names a NO_OK element") {
  StructureDescriptor structure;
  auto topo = Topology::create(structure, {"smart_vehicle"});
  auto analyzers = topo.ids_of(Role::Analyze);
  topo.element(analyzers[0]).state = ElementState::NO_OK;
  try {
    topo.first_notify();
    FAIL("expected SetupError");
  } catch (const SetupError& e) {
    CHECK(std::string(e.what()).find(analyzers[0]) != std::string::npos);
  }
  auto missing = topo.unhealthy_roles();
  REQUIRE(missing.size() == 1);
  CHECK(missing[0] == Role::Analyze);
}

TEST_CASE("decide_plan gates mined cases on the thresholds") {
  PlanPolicy plan;
  ExecutePolicy exec;
  exec.managed_elements = {"smart_vehicle"};

  RequestForChange rfc;
  rfc.id = 1;
  rfc.requirement_id = "cr1";
  rfc.ucase = Case3_Violation{"cr1"};
  rfc.measures = sacre::mining::EvalMeasures{1.0, 1.0, 1.0};
  auto d = decide_plan(rfc, plan, exec, 10);
  REQUIRE(d.plan.has_value());
  CHECK(d.plan->target_managed_element == "smart_vehicle");
  CHECK(d.plan->rfc_id == 1);
  CHECK_FALSE(d.plan->enacted_at.has_value());

  rfc.measures = sacre::mining::EvalMeasures{0.94, 1.0, 0.97};
  d = decide_plan(rfc, plan, exec, 11);
  CHECK_FALSE(d.plan.has_value());
  CHECK(d.failing_measure == "precision");

  RequestForChange sensor;
  sensor.id = 2;
  sensor.requirement_id = "cr2";
  sensor.ucase = Case2b_SensorDecalibrated{"facePosition"};
  d = decide_plan(sensor, plan, exec, 12);
  CHECK(d.plan.has_value());
}

TEST_CASE("knowledge base append, fetch, and column poisoning") {
  auto ps = sacre::sim::default_policies();
  KnowledgeBase kb(ps.knowledge_base);
  kb.register_requirements(sacre::sim::initial_requirements());
  kb.set_active_variables({"perclos", "facePosition", "heartBeatsPerMinute",
                           "handsOnSteeringWheel"});

  for (int i = 0; i < 5; ++i) {
    KbRecord rec;
    rec.tick = i;
    rec.values = cruise_values();
    rec.behavior_active = {{"cr1", i % 2 == 0}, {"cr2", false}, {"cr3", false}};
    kb.append(rec);
  }
  auto ds = kb.fetch("cr1");
  CHECK(ds.size() == 5);
  REQUIRE(ds.attributes().size() == 5);
  CHECK(ds.attributes()[0].name == "perclos");
  CHECK(ds.attributes().back().name == "cr1ExpectedBehaviorState");
  CHECK(ds.relation_name() == "cr1_context");
  CHECK(ds.row_is_active(0));
  CHECK_FALSE(ds.row_is_active(1));

  // A row recorded while a sensor was unhealthy poisons only that column.
  KbRecord bad;
  bad.tick = 5;
  bad.values = cruise_values();
  bad.invalid_variables = {"facePosition"};
  bad.behavior_active = {{"cr1", false}, {"cr2", false}, {"cr3", false}};
  kb.append(bad);
  auto poisoned = kb.fetch("cr1");
  CHECK(poisoned.size() == 6);
  REQUIRE(poisoned.attributes().size() == 4);
  for (const auto& a : poisoned.attributes()) CHECK(a.name != "facePosition");

  CHECK_THROWS(kb.fetch("cr9"));
  CHECK_THROWS(kb.append(KbRecord{3, cruise_values(), {}, {}}));  // out of order
}

TEST_CASE("no Case3 symptom before three qualifying iterations") {
  auto ps = sacre::sim::default_policies();
  StubManaged managed;
  Loop loop(ps, managed);
  loop.start();

  // Two dissatisfied iterations, then one satisfied: counter resets.
  for (int i = 0; i < 2; ++i) {
    auto symptoms = loop.iteration(snap(i, ctx1_values()), behaviors(false, true));
    CHECK(symptoms.empty());
  }
  CHECK(loop.iteration(snap(2, cruise_values()), behaviors(false)).empty());

  // Three in a row: exactly one Symptom on the third.
  std::vector<Symptom> emitted;
  for (int i = 3; i < 6; ++i) {
    auto symptoms = loop.iteration(snap(i, ctx1_values()), behaviors(false, true));
    for (auto& s : symptoms) emitted.push_back(s);
  }
  REQUIRE(emitted.size() == 1);
  CHECK(emitted[0].requirement_id == "cr1");
  CHECK(kind_of(emitted[0].ucase) == CaseKind::Case3);
  CHECK(emitted[0].tick == 5);

  // Pre-debounce dissatisfaction events were still recorded each iteration.
  auto events = loop.events().all<DissatisfactionEvent>();
  CHECK(events.size() == 5);
  loop.stop();
}

TEST_CASE("Case4 debounce spacing between symptoms") {
  auto ps = sacre::sim::default_policies();
  StubManaged managed;
  Loop loop(ps, managed);
  loop.start();
  std::vector<std::int64_t> symptom_iterations;
  // Context false, behavior active: Case 4 on cr3 via lane_keeping.
  for (int i = 0; i < 12; ++i) {
    auto symptoms =
        loop.iteration(snap(i, cruise_values()), behaviors(false, false, false, true));
    for (auto& s : symptoms)
      if (s.requirement_id == "cr3") symptom_iterations.push_back(i);
  }
  REQUIRE(!symptom_iterations.empty());
  CHECK(symptom_iterations[0] == 2);
  for (std::size_t i = 1; i < symptom_iterations.size(); ++i)
    CHECK(symptom_iterations[i] - symptom_iterations[i - 1] >= 3);
  loop.stop();
}

TEST_CASE("sensor fault strips the variable from referencing requirements") {
  auto ps = sacre::sim::default_policies();
  StubManaged managed;
  Loop loop(ps, managed);
  loop.start();

  auto values = cruise_values();
  auto pre = values;
  pre["facePosition"] = 1.4;  // decalibrated reading, pre-clamp scale
  // Case 2b symptoms are immediate; analyze acts after 3 consecutive.
  std::size_t sensor_symptoms = 0;
  for (int i = 0; i < 3; ++i) {
    auto symptoms = loop.iteration(snap(i, values, pre), behaviors(false));
    for (auto& s : symptoms)
      if (kind_of(s.ucase) == CaseKind::Case2b) ++sensor_symptoms;
    loop.wait_quiescent(std::chrono::microseconds(100000));
  }
  CHECK(sensor_symptoms == 3);
  loop.wait_quiescent(std::chrono::microseconds(500000));

  // cr2 and cr3 reference facePosition; cr1 does not.
  REQUIRE(managed.applied.size() == 2);
  std::set<std::string> adapted;
  for (const auto& p : managed.applied) {
    adapted.insert(p.requirement_id);
    CHECK_FALSE(p.new_operationalization.references("facePosition"));
  }
  CHECK(adapted == std::set<std::string>{"cr2", "cr3"});
  CHECK(loop.learner_calls() == 0);
  CHECK_FALSE(loop.kb().active_variables().contains("facePosition"));

  auto enactments = loop.events().all<EnactmentEvent>();
  REQUIRE(enactments.size() == 2);
  for (const auto& e : enactments) {
    CHECK(e.kind == CaseKind::Case2b);
    CHECK(e.response_ms >= 0.0);
    CHECK_FALSE(e.measures.has_value());
    CHECK_FALSE(e.symptom_ids.empty());
  }

  // Recovery: three healthy readings restore the variable, no change plans.
  std::size_t plans_before = managed.applied.size();
  for (int i = 3; i < 7; ++i) {
    loop.iteration(snap(i, values), behaviors(false));
    loop.wait_quiescent(std::chrono::microseconds(100000));
  }
  CHECK(loop.kb().active_variables().contains("facePosition"));
  CHECK(managed.applied.size() == plans_before);
  CHECK_FALSE(loop.events().all<Case2RecoveryEvent>().empty());
  loop.stop();
}

TEST_CASE("enactment provenance chains back to symptoms") {
  auto ps = sacre::sim::default_policies();
  StubManaged managed;
  Loop loop(ps, managed);
  loop.start();
  auto values = cruise_values();
  auto pre = values;
  pre["handsOnSteeringWheel"] = 1.6;  // valid range is [0, 1] normalized
  std::vector<std::uint64_t> symptom_ids;
  for (int i = 0; i < 3; ++i) {
    auto symptoms = loop.iteration(snap(i, values, pre), behaviors(false));
    for (auto& s : symptoms)
      if (kind_of(s.ucase) == CaseKind::Case2b) symptom_ids.push_back(s.id);
    loop.wait_quiescent(std::chrono::microseconds(100000));
  }
  loop.wait_quiescent(std::chrono::microseconds(500000));

  // Only cr3 references handsOnSteeringWheel.
  auto enactments = loop.events().all<EnactmentEvent>();
  REQUIRE(enactments.size() == 1);
  CHECK(enactments[0].requirement_id == "cr3");
  auto rfcs = loop.events().all<RfcEvent>();
  REQUIRE(rfcs.size() == 1);
  CHECK(enactments[0].rfc_id == rfcs[0].rfc.id);
  for (auto sid : enactments[0].symptom_ids) {
    bool known = false;
    for (auto id : symptom_ids) known |= id == sid;
    CHECK(known);
  }
  loop.stop();
}

TEST_CASE("manager health duties") {
  auto ps = sacre::sim::default_policies();
  StubManaged managed;
  Loop loop(ps, managed);
  CHECK(loop.verify_health().empty());
  auto analyzers = loop.topology().ids_of(Role::Analyze);
  loop.mark_state(analyzers[0], ElementState::NO_OK);
  auto missing = loop.verify_health();
  REQUIRE(missing.size() == 1);
  CHECK(missing[0] == Role::Analyze);
  loop.mark_state(analyzers[0], ElementState::OK);
  CHECK(loop.verify_health().empty());
  CHECK_THROWS(loop.mark_state("nonexistent", ElementState::NO_OK));
}

TEST_CASE("rfc validation ties measures to mined cases") {
  RequestForChange mined;
  mined.ucase = Case3_Violation{"cr1"};
  CHECK_THROWS_AS(mined.validate(), std::invalid_argument);
  mined.measures = sacre::mining::EvalMeasures{1, 1, 1};
  CHECK_NOTHROW(mined.validate());

  RequestForChange sensor;
  sensor.ucase = Case2a_SensorLost{"perclos"};
  CHECK_NOTHROW(sensor.validate());
  sensor.measures = sacre::mining::EvalMeasures{1, 1, 1};
  CHECK_THROWS_AS(sensor.validate(), std::invalid_argument);
}
