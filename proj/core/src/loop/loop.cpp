#include "sacre/loop/loop.hpp"

#include <ctime>
#include <functional>

#include "sacre/mining/learner.hpp"

namespace sacre::loop {

using namespace std::chrono_literals;

double thread_cpu_ms() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) * 1e3 +
         static_cast<double>(ts.tv_nsec) / 1e6;
}

Loop::Loop(PolicySet policies, ManagedElement& managed, LoopOptions options)
    : policies_(std::move(policies)),
      managed_(managed),
      options_(std::move(options)) {
  policies_.validate();
  topology_ = Topology::create(policies_.manager.structure, {managed_.id()});
  kb_ = std::make_unique<KnowledgeBase>(policies_.knowledge_base);
  kb_->register_requirements(managed_.requirements());
  for (const auto& v : options_.initially_inactive_variables)
    kb_->remove_active_variable(v);
  for (const auto& spec : policies_.monitor.variables)
    sensor_status_[spec.name] = options_.initially_decalibrated.contains(spec.name)
                                    ? reqmodel::SensorStatus::Decalibrated
                                    : reqmodel::SensorStatus::Healthy;
  for (const auto& req : kb_->requirements_snapshot()) adaptation_epoch_[req.id] = 0;
}

Loop::~Loop() { stop(); }

void Loop::start() {
  if (running_.exchange(true)) return;
  topology_.first_notify();
  if (options_.synchronous) return;
  analyze_thread_ = std::thread([this] { analyze_worker(); });
  kb_thread_ = std::thread([this] { kb_worker(); });
}

void Loop::stop() {
  if (!running_.exchange(false)) return;
  if (analyze_thread_.joinable()) analyze_thread_.join();
  if (kb_thread_.joinable()) kb_thread_.join();
}

std::vector<Symptom> Loop::iteration(
    const reqmodel::EnvironmentSnapshot& snapshot,
    const std::vector<reqmodel::BehaviorState>& behaviors) {
  if (!running_.load()) throw std::logic_error("loop is not started");
  const std::int64_t iter = iteration_count_.fetch_add(1);

  std::vector<reqmodel::VariableSpec> variables;
  {
    std::lock_guard lock(policy_mutex_);
    variables = policies_.monitor.variables;
  }

  std::vector<Symptom> emitted;
  auto emit = [&](const std::string& req_id, reqmodel::UncertaintyCase ucase,
                  std::uint64_t epoch) {
    Symptom s;
    s.id = next_message_id_.fetch_add(1);
    s.requirement_id = req_id;
    s.ucase = std::move(ucase);
    s.tick = iter;
    s.emitted_at = Clock::now();
    s.emitted_cpu_ms = thread_cpu_ms();
    s.epoch = epoch;
    events_.record(SymptomEvent{s});
    symptom_channel_.push(s);
    emitted.push_back(std::move(s));
  };

  // Sensor-level anomaly detection (Case 2, no debounce at the Monitor).
  std::set<std::string> invalid;
  for (const auto& spec : variables) {
    const auto prior = sensor_status_[spec.name];
    auto result = reqmodel::detect_sensor_anomaly(spec, snapshot, prior);
    sensor_status_[spec.name] = result.status;
    if (result.status != reqmodel::SensorStatus::Healthy) invalid.insert(spec.name);
    if (result.uncertainty) emit("", std::move(*result.uncertainty), 0);
  }

  std::map<std::string, const reqmodel::BehaviorState*> by_behavior;
  for (const auto& b : behaviors) by_behavior[b.behavior_id] = &b;

  const auto requirements = kb_->requirements_snapshot();
  const auto active_vars = kb_->active_variables();

  // Persist this iteration into the knowledge base.
  KbRecord record;
  record.tick = snapshot.tick;
  record.values = snapshot.values;
  record.invalid_variables = invalid;
  for (const auto& req : requirements) {
    auto it = by_behavior.find(req.behavior_id);
    if (it == by_behavior.end())
      throw std::invalid_argument("no behavior state supplied for '" +
                                  req.behavior_id + "'");
    record.behavior_active[req.id] = it->second->active;
  }
  record_channel_.push(std::move(record));

  // Requirement-level satisfaction with per-case debounce.
  for (const auto& req : requirements) {
    const auto& beh = *by_behavior.at(req.behavior_id);
    const auto ctx =
        reqmodel::eval_operationalization(req.operationalization, snapshot, active_vars);
    const auto verdict = reqmodel::assess_satisfaction(req, ctx, beh);
    const std::uint64_t epoch = adaptation_epoch_.at(req.id).load();

    std::optional<reqmodel::CaseKind> observed;
    if (verdict.uncertainty) {
      const auto kind = reqmodel::kind_of(*verdict.uncertainty);
      observed = kind;
      events_.record(DissatisfactionEvent{req.id, kind, iter});
      auto& counter = debounce_[{req.id, kind}];
      if (counter.epoch != epoch) counter = {0, epoch};
      ++counter.count;
      if (counter.count >= policies_.knowledge_base.min_iterations(kind)) {
        emit(req.id, *verdict.uncertainty, epoch);
        counter.count = 0;
      }
    }
    // A break in the streak resets every other counter of this requirement.
    for (auto& [key, counter] : debounce_)
      if (key.first == req.id && key.second != observed) counter.count = 0;
  }
  if (options_.synchronous) drain_channels();
  return emitted;
}

void Loop::drain_channels() {
  while (auto record = record_channel_.pop_wait(0us)) kb_->append(std::move(*record));
  while (auto s = symptom_channel_.pop_wait(0us)) process_symptom(*s);
}

void Loop::kb_worker() {
  while (running_.load()) {
    auto record = record_channel_.pop_wait(500us);
    if (!record) {
      quiescent_cv_.notify_all();
      continue;
    }
    kb_->append(std::move(*record));
    if (record_channel_.empty()) quiescent_cv_.notify_all();
  }
  while (auto record = record_channel_.pop_wait(0us)) kb_->append(std::move(*record));
}

void Loop::analyze_worker() {
  while (running_.load()) {
    auto s = symptom_channel_.pop_wait(500us);
    if (!s) {
      quiescent_cv_.notify_all();
      continue;
    }
    analyze_idle_.store(false);
    process_symptom(*s);
    if (symptom_channel_.empty()) {
      analyze_idle_.store(true);
      quiescent_cv_.notify_all();
    }
  }
  analyze_idle_.store(true);
}

bool Loop::wait_quiescent(std::chrono::microseconds cap) {
  if (options_.synchronous) {
    drain_channels();
    return true;
  }
  auto drained = [this] {
    return symptom_channel_.empty() && record_channel_.empty() && analyze_idle_.load();
  };
  std::unique_lock lock(quiescent_mutex_);
  return quiescent_cv_.wait_for(lock, cap, drained);
}

std::vector<Role> Loop::verify_health() const { return topology_.unhealthy_roles(); }

void Loop::mark_state(const std::string& element_id, ElementState state) {
  topology_.element(element_id).state = state;
}

void Loop::reconfigure_plan(const PlanPolicy& policy) {
  std::lock_guard lock(policy_mutex_);
  policies_.plan = policy;
}

void Loop::reconfigure_monitor(const MonitorPolicy& policy) {
  if (policy.variables.empty())
    throw std::invalid_argument("monitor policy declares no variables");
  std::lock_guard lock(policy_mutex_);
  policies_.monitor = policy;
}

void Loop::process_symptom(const Symptom& s) {
  const auto kind = reqmodel::kind_of(s.ucase);
  if (reqmodel::is_mined_case(kind)) {
    // Drop symptoms from before the requirement's last adaptation.
    if (s.epoch != adaptation_epoch_.at(s.requirement_id).load()) return;
    analyze_mined_case(s);
  } else {
    analyze_sensor_case(s);
  }
}

void Loop::analyze_mined_case(const Symptom& s) {
  const auto ds = kb_->fetch(s.requirement_id);
  const std::uint64_t call = learner_calls_.fetch_add(1);
  const std::uint64_t seed =
      options_.analysis_seed ^ (std::hash<std::string>{}(s.requirement_id) + call);

  if (ds.records().size() < 10) {
    events_.record(AnalysisEvent{s.id, s.requirement_id, false, ds.records().size()});
    return;
  }
  const auto rs = mining::learn_ruleset(ds, seed);
  if (rs.degenerate || rs.rules.empty()) {
    events_.record(AnalysisEvent{s.id, s.requirement_id, false, ds.records().size()});
    return;
  }
  // A result is significant only once it is reproducible: two consecutive
  // analyses of the same uncertainty must learn the same operationalization.
  // This keeps the loop collecting evidence while the learned rules are still
  // shifting with each new record.
  const auto candidate = mining::ruleset_to_operationalization(rs);
  // Validation runs on every analysis, not just the emitting one (the paper
  // cross-validates each time the mining algorithm is called).
  const auto measures = mining::cross_validate(ds, 10, seed + 1);
  const auto kind = reqmodel::kind_of(s.ucase);
  auto& chain = mined_candidates_[{s.requirement_id, kind}];
  if (chain.symptom_ids.empty()) {
    chain.first_emitted_at = s.emitted_at;
    chain.first_emitted_cpu_ms = s.emitted_cpu_ms;
  }
  chain.symptom_ids.push_back(s.id);
  // The chain's first analysis sees a single debounce window of fresh
  // evidence; it seeds the comparison but cannot confirm it, so emission
  // happens at the earliest on the third analysis.
  const auto text = reqmodel::format_operationalization(candidate);
  if (chain.symptom_ids.size() < 3 || text != chain.text) {
    chain.text = text;
    events_.record(AnalysisEvent{s.id, s.requirement_id, false, ds.records().size()});
    return;
  }

  events_.record(AnalysisEvent{s.id, s.requirement_id, true, ds.records().size()});

  RequestForChange rfc;
  rfc.id = next_message_id_.fetch_add(1);
  rfc.requirement_id = s.requirement_id;
  rfc.candidate = candidate;
  rfc.measures = measures;
  rfc.ucase = s.ucase;
  rfc.symptom_ids = chain.symptom_ids;
  rfc.origin_emitted_at = chain.first_emitted_at;
  rfc.origin_emitted_cpu_ms = chain.first_emitted_cpu_ms;
  rfc.dataset_rows = ds.records().size();
  events_.record(RfcEvent{rfc});
  dispatch_rfc(std::move(rfc));
}

void Loop::analyze_sensor_case(const Symptom& s) {
  const auto kind = reqmodel::kind_of(s.ucase);
  const auto variable = reqmodel::case_variable(s.ucase);

  if (kind == reqmodel::CaseKind::Case2c) {
    sensor_case_counts_.erase({reqmodel::CaseKind::Case2a, variable});
    sensor_case_counts_.erase({reqmodel::CaseKind::Case2b, variable});
    kb_->add_active_variable(variable);
    const double response_ms =
        options_.synchronous && s.emitted_cpu_ms >= 0.0
            ? thread_cpu_ms() - s.emitted_cpu_ms
            : std::chrono::duration<double, std::milli>(Clock::now() - s.emitted_at)
                  .count();
    events_.record(
        Case2RecoveryEvent{variable, response_ms, iteration_count_.load(), s.id});
    return;
  }

  const auto other = kind == reqmodel::CaseKind::Case2a ? reqmodel::CaseKind::Case2b
                                                        : reqmodel::CaseKind::Case2a;
  sensor_case_counts_.erase({other, variable});
  const int count = ++sensor_case_counts_[{kind, variable}];
  {
    std::lock_guard lock(policy_mutex_);
    if (count < policies_.analyze.min_iterations(kind)) return;
  }
  if (!kb_->active_variables().contains(variable)) return;  // already handled

  kb_->remove_active_variable(variable);
  for (const auto& req : kb_->requirements_snapshot()) {
    if (!req.operationalization.references(variable)) continue;
    RequestForChange rfc;
    rfc.id = next_message_id_.fetch_add(1);
    rfc.requirement_id = req.id;
    rfc.candidate = reqmodel::strip_variable(req.operationalization, variable);
    rfc.ucase = s.ucase;
    rfc.symptom_ids = {s.id};
    rfc.origin_emitted_at = s.emitted_at;
    rfc.origin_emitted_cpu_ms = s.emitted_cpu_ms;
    events_.record(RfcEvent{rfc});
    dispatch_rfc(std::move(rfc));
  }
}

void Loop::dispatch_rfc(RequestForChange rfc) {
  PlanDecision decision;
  {
    std::lock_guard lock(policy_mutex_);
    decision = decide_plan(rfc, policies_.plan, policies_.execute,
                           next_message_id_.fetch_add(1));
  }
  events_.record(PlanDecisionEvent{rfc.id, decision.plan.has_value(),
                                   decision.failing_measure});
  if (decision.plan) enact(std::move(*decision.plan), rfc);
}

void Loop::enact(ChangePlan plan, const RequestForChange& rfc) {
  if (plan.target_managed_element != managed_.id())
    throw std::invalid_argument("change plan targets unknown managed element '" +
                                plan.target_managed_element + "'");
  if (!enacted_plan_ids_.insert(plan.id).second)
    throw std::logic_error("change plan " + std::to_string(plan.id) +
                           " was already enacted");
  managed_.apply_adaptation(plan);
  kb_->update_operationalization(plan.requirement_id, plan.new_operationalization);
  plan.enacted_at = Clock::now();
  adaptation_epoch_.at(plan.requirement_id).fetch_add(1);
  plans_enacted_.fetch_add(1);
  for (auto it = mined_candidates_.begin(); it != mined_candidates_.end();)
    it = it->first.first == plan.requirement_id ? mined_candidates_.erase(it)
                                                : std::next(it);

  EnactmentEvent e;
  e.plan_id = plan.id;
  e.rfc_id = rfc.id;
  e.symptom_ids = rfc.symptom_ids;
  e.requirement_id = plan.requirement_id;
  e.kind = reqmodel::kind_of(rfc.ucase);
  e.response_ms =
      options_.synchronous && rfc.origin_emitted_cpu_ms >= 0.0
          ? thread_cpu_ms() - rfc.origin_emitted_cpu_ms
          : std::chrono::duration<double, std::milli>(*plan.enacted_at -
                                                      rfc.origin_emitted_at)
                .count();
  e.measures = rfc.measures;
  e.operationalization_text =
      reqmodel::format_operationalization(plan.new_operationalization, options_.aliases);
  e.dataset_rows = rfc.dataset_rows;
  e.iteration = iteration_count_.load();
  events_.record(std::move(e));
}

}  // namespace sacre::loop
