#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sacre/mining/measures.hpp"
#include "sacre/reqmodel/types.hpp"

namespace sacre::loop {

using Clock = std::chrono::steady_clock;

// Calling thread's consumed CPU time in milliseconds. Under cooperative
// (synchronous) scheduling the whole Symptom->enactment pipeline runs on one
// thread, so differences of this clock measure pipeline work unaffected by
// preemption or CPU steal.
double thread_cpu_ms();

// Monitor -> Analyze. Requirement-level cases carry a requirement id;
// sensor-level cases name their variable inside the case itself.
struct Symptom {
  std::uint64_t id = 0;
  std::string requirement_id;  // empty for pure sensor cases
  reqmodel::UncertaintyCase ucase = reqmodel::Case1_NoOperationalization{};
  std::int64_t tick = 0;       // SACRE iteration index
  Clock::time_point emitted_at{};
  double emitted_cpu_ms = -1.0;  // thread_cpu_ms() at emission, same-thread use
  std::uint64_t epoch = 0;     // adaptation epoch of the requirement at emission
};

// Analyze -> Plan. Measures travel only with the mined cases (1, 3, 4).
struct RequestForChange {
  std::uint64_t id = 0;
  std::string requirement_id;
  reqmodel::Operationalization candidate;
  std::optional<mining::EvalMeasures> measures;
  reqmodel::UncertaintyCase ucase = reqmodel::Case1_NoOperationalization{};
  std::vector<std::uint64_t> symptom_ids;
  Clock::time_point origin_emitted_at{};  // the originating Symptom's timestamp
  double origin_emitted_cpu_ms = -1.0;    // CPU-time stamp of the same Symptom
  std::size_t dataset_rows = 0;           // KB rows analyzed (0 for Case 2)

  void validate() const {
    const bool mined = reqmodel::is_mined_case(reqmodel::kind_of(ucase));
    if (mined != measures.has_value())
      throw std::invalid_argument(
          "RequestForChange: measures must be present exactly for mined cases");
  }
};

// Plan -> Execute. enacted_at is stamped exactly once, by the Execute element.
struct ChangePlan {
  std::uint64_t id = 0;
  std::uint64_t rfc_id = 0;
  std::string requirement_id;
  reqmodel::Operationalization new_operationalization;
  std::string target_managed_element;
  std::optional<Clock::time_point> enacted_at;
};

}  // namespace sacre::loop
