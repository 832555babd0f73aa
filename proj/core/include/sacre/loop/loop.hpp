#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <thread>

#include "sacre/loop/channel.hpp"
#include "sacre/loop/elements.hpp"
#include "sacre/loop/event_log.hpp"
#include "sacre/loop/knowledge_base.hpp"
#include "sacre/loop/messages.hpp"
#include "sacre/loop/policy.hpp"
#include "sacre/reqmodel/eval.hpp"
#include "sacre/reqmodel/text.hpp"

namespace sacre::loop {

// Adaptation endpoint exposed by a managed element (the smart vehicle).
class ManagedElement {
 public:
  virtual ~ManagedElement() = default;
  virtual std::string id() const = 0;
  virtual std::vector<reqmodel::ContextualRequirement> requirements() const = 0;
  virtual void apply_adaptation(const ChangePlan& plan) = 0;
};

struct LoopOptions {
  std::uint64_t analysis_seed = 1;
  // Textual aliasing used when logging enacted operationalizations.
  reqmodel::AliasMap aliases;
  // Variables to pre-mark Decalibrated (us4b-style resumed runs).
  std::set<std::string> initially_decalibrated;
  // Variables initially excluded from the active set.
  std::set<std::string> initially_inactive_variables;
  // When set, no worker threads are spawned; the channels are drained in
  // deterministic order (records, then symptoms) at the end of iteration().
  // Same queue contract, cooperative scheduling — used by the measurement
  // harness so response times reflect pipeline work rather than scheduler
  // wake-up latency.
  bool synchronous = false;
};

// The SACRE MAPE-K loop. Monitor runs on the caller's thread via
// iteration(); Analyze (and the synchronous Plan/Execute behind it) and the
// Knowledge-base writer run on their own threads, fed by unbounded ordered
// channels.
class Loop {
 public:
  Loop(PolicySet policies, ManagedElement& managed, LoopOptions options = {});
  ~Loop();

  Loop(const Loop&) = delete;
  Loop& operator=(const Loop&) = delete;

  void start();
  void stop();
  bool started() const { return running_.load(); }

  // One SACRE iteration over the latest sensed snapshot and behavior states.
  // Returns the Symptoms emitted this iteration.
  std::vector<Symptom> iteration(const reqmodel::EnvironmentSnapshot& snapshot,
                                 const std::vector<reqmodel::BehaviorState>& behaviors);

  // Blocks until the symptom/KB channels are drained and the Analyze worker
  // is idle, or until `cap` elapses (it will elapse while mining runs).
  bool wait_quiescent(std::chrono::microseconds cap);

  // Autonomic-manager duties.
  std::vector<Role> verify_health() const;
  void mark_state(const std::string& element_id, ElementState state);
  void reconfigure_plan(const PlanPolicy& policy);
  void reconfigure_monitor(const MonitorPolicy& policy);

  const Topology& topology() const { return topology_; }
  KnowledgeBase& kb() { return *kb_; }
  const EventLog& events() const { return events_; }
  std::uint64_t learner_calls() const { return learner_calls_.load(); }
  std::int64_t iterations_run() const { return iteration_count_.load(); }
  std::uint64_t change_plans_enacted() const { return plans_enacted_.load(); }

 private:
  void analyze_worker();
  void kb_worker();
  void drain_channels();
  void process_symptom(const Symptom& s);
  void analyze_mined_case(const Symptom& s);
  void analyze_sensor_case(const Symptom& s);
  void dispatch_rfc(RequestForChange rfc);
  void enact(ChangePlan plan, const RequestForChange& rfc);

  PolicySet policies_;
  mutable std::mutex policy_mutex_;
  ManagedElement& managed_;
  LoopOptions options_;
  Topology topology_;
  std::unique_ptr<KnowledgeBase> kb_;
  EventLog events_;

  Channel<Symptom> symptom_channel_;
  Channel<KbRecord> record_channel_;

  std::thread analyze_thread_;
  std::thread kb_thread_;
  std::atomic<bool> running_{false};
  std::atomic<bool> analyze_idle_{true};
  std::mutex quiescent_mutex_;
  std::condition_variable quiescent_cv_;

  // Monitor-side state (driver thread only).
  std::map<std::string, reqmodel::SensorStatus> sensor_status_;
  struct DebounceCounter {
    int count = 0;
    std::uint64_t epoch = 0;
  };
  std::map<std::pair<std::string, reqmodel::CaseKind>, DebounceCounter> debounce_;

  // Analyze-side state (analyze thread only).
  std::map<std::pair<reqmodel::CaseKind, std::string>, int> sensor_case_counts_;
  // Analysis chain per (requirement, case): a mined result counts as
  // significant once two consecutive analyses reproduce it. The chain keeps
  // every contributing Symptom so the RequestForChange carries the full
  // provenance, timed from the Symptom that opened the chain.
  struct MinedChain {
    std::string text;
    std::chrono::steady_clock::time_point first_emitted_at{};
    double first_emitted_cpu_ms = -1.0;
    std::vector<std::uint64_t> symptom_ids;
  };
  std::map<std::pair<std::string, reqmodel::CaseKind>, MinedChain> mined_candidates_;

  // Shared counters.
  std::atomic<std::int64_t> iteration_count_{0};
  std::atomic<std::uint64_t> next_message_id_{1};
  std::atomic<std::uint64_t> learner_calls_{0};
  std::atomic<std::uint64_t> plans_enacted_{0};
  std::map<std::string, std::atomic<std::uint64_t>> adaptation_epoch_;
  std::set<std::uint64_t> enacted_plan_ids_;
};

}  // namespace sacre::loop
