#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "sacre/loop/policy.hpp"
#include "sacre/mining/dataset.hpp"
#include "sacre/reqmodel/types.hpp"

namespace sacre::loop {

// One persisted SACRE iteration: normalized sensor values, the variables whose
// sensor was unhealthy when the row was recorded, and every requirement's
// behavior state.
struct KbRecord {
  std::int64_t tick = 0;
  std::map<std::string, double> values;
  std::set<std::string> invalid_variables;
  std::map<std::string, bool> behavior_active;  // keyed by requirement id
};

// Single-writer store shared by the loop elements: context history for
// mining, the current requirement registry, and the active variable set.
// Readers get immutable snapshots.
class KnowledgeBase {
 public:
  explicit KnowledgeBase(KnowledgeBasePolicy policy);

  void register_requirements(const std::vector<reqmodel::ContextualRequirement>& reqs);

  // Appends are atomic and must arrive in tick order.
  void append(KbRecord record);

  // Dataset snapshot for one requirement: persisted variables as numeric
  // columns, that requirement's behavior state as the class. Columns touched
  // by any unhealthy-sensor row are dropped; rows missing a remaining value
  // are excluded.
  mining::Dataset fetch(const std::string& requirement_id) const;

  std::size_t record_count() const;

  std::vector<reqmodel::ContextualRequirement> requirements_snapshot() const;
  reqmodel::ContextualRequirement requirement(const std::string& id) const;
  void update_operationalization(const std::string& requirement_id,
                                 const reqmodel::Operationalization& op);

  std::set<std::string> active_variables() const;
  void set_active_variables(std::set<std::string> vars);
  void remove_active_variable(const std::string& var);
  void add_active_variable(const std::string& var);

  const KnowledgeBasePolicy& policy() const { return policy_; }

  // Writes the current dataset of one requirement as an .arff file.
  void persist_arff(const std::string& requirement_id, const std::string& path) const;

 private:
  KnowledgeBasePolicy policy_;
  mutable std::mutex mutex_;
  std::vector<KbRecord> records_;
  std::map<std::string, reqmodel::ContextualRequirement> requirements_;
  std::set<std::string> active_variables_;
  std::int64_t last_tick_ = -1;
};

}  // namespace sacre::loop
