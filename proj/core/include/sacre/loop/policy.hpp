#pragma once

#include <map>
#include <string>
#include <vector>

#include "sacre/reqmodel/types.hpp"

namespace sacre::loop {

// Element counts demanded by the manager policy. A complete loop needs at
// least one element of each of the five roles.
struct StructureDescriptor {
  int monitors = 1;
  int analyzers = 1;
  int planners = 1;
  int executors = 1;
  int knowledge_bases = 1;
};

struct ManagerPolicy {
  StructureDescriptor structure;
};

struct MonitorPolicy {
  std::vector<reqmodel::VariableSpec> variables;
};

struct AnalyzePolicy {
  std::string algorithm = "ripper";
  std::vector<std::string> input_variables;
  std::vector<std::string> output_measures = {"precision", "recall", "fMeasure"};
  // Repeated analysis iterations required before acting, per uncertainty case.
  std::map<reqmodel::CaseKind, int> min_analysis_iterations;

  int min_iterations(reqmodel::CaseKind k) const {
    auto it = min_analysis_iterations.find(k);
    return it == min_analysis_iterations.end() ? 0 : it->second;
  }
};

struct PlanPolicy {
  double precision_min = 0.95;
  double recall_min = 0.95;
  double fmeasure_min = 0.95;
};

struct ExecutePolicy {
  std::vector<std::string> managed_elements;
};

struct KnowledgeBasePolicy {
  double frequency = 14.28;  // SACRE iterations per simulated second
  // Consecutive dissatisfied iterations before a Symptom, per case.
  std::map<reqmodel::CaseKind, int> min_uncertainty_iterations;
  std::vector<std::string> persist_variables;

  int min_iterations(reqmodel::CaseKind k) const {
    auto it = min_uncertainty_iterations.find(k);
    return it == min_uncertainty_iterations.end() ? 0 : it->second;
  }
};

struct PolicySet {
  ManagerPolicy manager;
  MonitorPolicy monitor;
  AnalyzePolicy analyze;
  PlanPolicy plan;
  ExecutePolicy execute;
  KnowledgeBasePolicy knowledge_base;

  void validate() const;  // throws std::invalid_argument on violations
};

// Properties-file persistence. The manager file carries the structure plus
// paths (relative to its own directory) of the five role files.
PolicySet load_policy_set(const std::string& manager_path);
void save_policy_set(const PolicySet& ps, const std::string& directory);

// Flat key=value parser: '#' comments, UTF-8, comma-separated lists.
std::map<std::string, std::string> read_properties(const std::string& path);

}  // namespace sacre::loop
