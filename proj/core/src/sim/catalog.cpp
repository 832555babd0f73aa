#include "sacre/sim/catalog.hpp"

namespace sacre::sim {

using reqmodel::AtomicCondition;
using reqmodel::CmpOp;
using reqmodel::Conjunction;
using reqmodel::Operationalization;

std::vector<reqmodel::VariableSpec> drowsiness_variables() {
  return {
      {"perclos", 0.0, 1.0, 0.0, 1.0, reqmodel::Preprocessing::perclos_window(60)},
      {"facePosition", 0.0, 1.0, 0.0, 1.0},
      {"heartBeatsPerMinute", 0.0, 120.0, 0.3, 1.0},
      {"handsOnSteeringWheel", 0.0, 2.0, 0.0, 1.0},
  };
}

reqmodel::AliasMap drowsiness_aliases() {
  reqmodel::AliasMap aliases;
  aliases.add("heartBeatsPerMinute", "hbpm");
  aliases.add("handsOnSteeringWheel", "hosw");
  return aliases;
}

std::vector<reqmodel::ContextualRequirement> initial_requirements() {
  const std::string hbpm = "heartBeatsPerMinute";
  const std::string hosw = "handsOnSteeringWheel";

  Operationalization ctx1{{Conjunction{
      {"perclos", CmpOp::Ge, 0.15},
      {hbpm, CmpOp::Le, 0.60},
      {hbpm, CmpOp::Ge, 0.56},
  }}};
  Operationalization ctx2{{Conjunction{
      {"perclos", CmpOp::Ge, 0.21},
      {"facePosition", CmpOp::Eq, 1.0},
      {hbpm, CmpOp::Le, 0.55},
      {hbpm, CmpOp::Ge, 0.46},
  }}};
  Operationalization ctx3{{Conjunction{
      {"perclos", CmpOp::Gt, 0.30},
      {"facePosition", CmpOp::Eq, 1.0},
      {hbpm, CmpOp::Le, 0.45},
      {hosw, CmpOp::Lt, 1.0},
  }}};

  return {
      {"cr1", "drowsinessLevel1", ctx1, "seat_vibration"},
      {"cr2", "drowsinessLevel2", ctx2, "sound_light"},
      {"cr3", "drowsinessLevel3", ctx3, "lane_keeping"},
  };
}

loop::PolicySet default_policies() {
  loop::PolicySet ps;
  ps.monitor.variables = drowsiness_variables();

  ps.analyze.algorithm = "ripper";
  for (const auto& v : ps.monitor.variables)
    ps.analyze.input_variables.push_back(v.name);
  ps.analyze.output_measures = {"precision", "recall", "fMeasure"};
  ps.analyze.min_analysis_iterations = {{reqmodel::CaseKind::Case2a, 3},
                                        {reqmodel::CaseKind::Case2b, 3},
                                        {reqmodel::CaseKind::Case2c, 1}};

  ps.plan.precision_min = 0.95;
  ps.plan.recall_min = 0.95;
  ps.plan.fmeasure_min = 0.95;

  ps.execute.managed_elements = {"smart_vehicle"};

  ps.knowledge_base.frequency = 14.28;
  ps.knowledge_base.min_uncertainty_iterations = {{reqmodel::CaseKind::Case1, 3},
                                                  {reqmodel::CaseKind::Case3, 3},
                                                  {reqmodel::CaseKind::Case4, 3}};
  for (const auto& v : ps.monitor.variables)
    ps.knowledge_base.persist_variables.push_back(v.name);

  ps.validate();
  return ps;
}

}  // namespace sacre::sim
