#include "sacre/loop/knowledge_base.hpp"

#include <stdexcept>

#include "sacre/mining/arff.hpp"

namespace sacre::loop {

KnowledgeBase::KnowledgeBase(KnowledgeBasePolicy policy) : policy_(std::move(policy)) {
  for (const auto& v : policy_.persist_variables) active_variables_.insert(v);
}

void KnowledgeBase::register_requirements(
    const std::vector<reqmodel::ContextualRequirement>& reqs) {
  std::lock_guard lock(mutex_);
  for (const auto& r : reqs) {
    if (requirements_.contains(r.id))
      throw std::invalid_argument("duplicate requirement id '" + r.id + "'");
    requirements_.emplace(r.id, r);
  }
}

void KnowledgeBase::append(KbRecord record) {
  std::lock_guard lock(mutex_);
  if (record.tick <= last_tick_)
    throw std::invalid_argument("KB append out of tick order");
  last_tick_ = record.tick;
  records_.push_back(std::move(record));
}

mining::Dataset KnowledgeBase::fetch(const std::string& requirement_id) const {
  std::lock_guard lock(mutex_);
  if (!requirements_.contains(requirement_id))
    throw std::out_of_range("unknown requirement '" + requirement_id + "'");

  // Drop any column recorded while its sensor was lost or decalibrated.
  std::set<std::string> poisoned;
  for (const auto& rec : records_)
    for (const auto& v : rec.invalid_variables) poisoned.insert(v);

  std::vector<std::string> columns;
  for (const auto& v : policy_.persist_variables)
    if (!poisoned.contains(v)) columns.push_back(v);

  std::vector<mining::Attribute> attrs;
  for (const auto& c : columns) attrs.push_back(mining::Attribute::numeric(c));
  attrs.push_back(mining::Attribute::nominal(
      requirement_id + "ExpectedBehaviorState",
      {mining::kClassActive, mining::kClassInactive}));

  mining::Dataset ds(requirement_id + "_context", std::move(attrs));
  for (const auto& rec : records_) {
    auto beh = rec.behavior_active.find(requirement_id);
    if (beh == rec.behavior_active.end()) continue;
    std::vector<mining::Cell> row;
    row.reserve(columns.size() + 1);
    bool complete = true;
    for (const auto& c : columns) {
      auto it = rec.values.find(c);
      if (it == rec.values.end()) { complete = false; break; }
      row.emplace_back(it->second);
    }
    if (!complete) continue;
    row.emplace_back(beh->second ? mining::kClassActive : mining::kClassInactive);
    ds.append(std::move(row));
  }
  return ds;
}

std::size_t KnowledgeBase::record_count() const {
  std::lock_guard lock(mutex_);
  return records_.size();
}

std::vector<reqmodel::ContextualRequirement>
KnowledgeBase::requirements_snapshot() const {
  std::lock_guard lock(mutex_);
  std::vector<reqmodel::ContextualRequirement> out;
  out.reserve(requirements_.size());
  for (const auto& [_, r] : requirements_) out.push_back(r);
  return out;
}

reqmodel::ContextualRequirement KnowledgeBase::requirement(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = requirements_.find(id);
  if (it == requirements_.end())
    throw std::out_of_range("unknown requirement '" + id + "'");
  return it->second;
}

void KnowledgeBase::update_operationalization(const std::string& requirement_id,
                                              const reqmodel::Operationalization& op) {
  std::lock_guard lock(mutex_);
  auto it = requirements_.find(requirement_id);
  if (it == requirements_.end())
    throw std::out_of_range("unknown requirement '" + requirement_id + "'");
  it->second.operationalization = op;
}

std::set<std::string> KnowledgeBase::active_variables() const {
  std::lock_guard lock(mutex_);
  return active_variables_;
}

void KnowledgeBase::set_active_variables(std::set<std::string> vars) {
  std::lock_guard lock(mutex_);
  active_variables_ = std::move(vars);
}

void KnowledgeBase::remove_active_variable(const std::string& var) {
  std::lock_guard lock(mutex_);
  active_variables_.erase(var);
}

void KnowledgeBase::add_active_variable(const std::string& var) {
  std::lock_guard lock(mutex_);
  active_variables_.insert(var);
}

void KnowledgeBase::persist_arff(const std::string& requirement_id,
                                 const std::string& path) const {
  mining::arff_write_file(fetch(requirement_id), path);
}

}  // namespace sacre::loop
