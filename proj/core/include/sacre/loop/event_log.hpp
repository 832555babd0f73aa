#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sacre/loop/messages.hpp"

namespace sacre::loop {

// One pre-debounce dissatisfaction observation (requirement-level).
struct DissatisfactionEvent {
  std::string requirement_id;
  reqmodel::CaseKind kind;
  std::int64_t iteration;
};

struct SymptomEvent {
  Symptom symptom;
};

struct AnalysisEvent {
  std::uint64_t symptom_id;
  std::string requirement_id;
  bool significant;          // false when the dataset was degenerate/too small
  std::size_t dataset_rows;
};

struct RfcEvent {
  RequestForChange rfc;
};

struct PlanDecisionEvent {
  std::uint64_t rfc_id;
  bool accepted;
  std::string failing_measure;  // set on rejection
};

// A ChangePlan was enacted in the managed element.
struct EnactmentEvent {
  std::uint64_t plan_id;
  std::uint64_t rfc_id;
  std::vector<std::uint64_t> symptom_ids;
  std::string requirement_id;
  reqmodel::CaseKind kind;
  double response_ms;  // enacted_at - originating Symptom emitted_at
  std::optional<mining::EvalMeasures> measures;
  std::string operationalization_text;
  std::size_t dataset_rows;
  std::int64_t iteration;
};

// Case 2c completion: variable restored to the active set, no ChangePlan.
struct Case2RecoveryEvent {
  std::string variable;
  double response_ms;
  std::int64_t iteration;
  std::uint64_t symptom_id;
};

using LoopEvent =
    std::variant<DissatisfactionEvent, SymptomEvent, AnalysisEvent, RfcEvent,
                 PlanDecisionEvent, EnactmentEvent, Case2RecoveryEvent>;

class EventLog {
 public:
  void record(LoopEvent e) {
    std::lock_guard lock(mutex_);
    events_.push_back(std::move(e));
  }

  std::vector<LoopEvent> snapshot() const {
    std::lock_guard lock(mutex_);
    return events_;
  }

  template <typename E>
  std::vector<E> all() const {
    std::lock_guard lock(mutex_);
    std::vector<E> out;
    for (const auto& e : events_)
      if (const auto* p = std::get_if<E>(&e)) out.push_back(*p);
    return out;
  }

 private:
  mutable std::mutex mutex_;
  std::vector<LoopEvent> events_;
};

}  // namespace sacre::loop
