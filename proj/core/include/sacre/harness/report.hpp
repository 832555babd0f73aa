#pragma once

#include "sacre/harness/runner.hpp"

namespace sacre::harness {

struct ScenarioMetrics {
  std::string scenario_id;
  int replications = 0;
  int adapted = 0;
  int errors = 0;
  // Over the learner-driven adaptations of this scenario.
  int mined_adaptations = 0;
  double mean_response_ms = 0.0;
  double stddev_response_ms = 0.0;
  bool degenerate = false;  // fewer than 2 response samples
  double mean_precision = -1.0;
  double mean_recall = -1.0;
  double mean_f_measure = -1.0;
  double mean_agreement = -1.0;
  // Over the sensor-driven (case 2) plans and recoveries.
  int case2_adaptations = 0;
  double mean_case2_response_ms = -1.0;
};

struct MetricsReport {
  std::vector<ScenarioMetrics> scenarios;
  // Dataset size vs response time across every mined adaptation.
  bool has_ppmcc = false;
  double rows_response_ppmcc = 0.0;
};

// Per-adaptation aggregation; usable both on live results and on records
// round-tripped through the CSV.
MetricsReport aggregate_records(const std::vector<AdaptationRecord>& records);

// Full aggregation, adding replication-level counts.
MetricsReport aggregate(const std::vector<ReplicationResult>& runs);

std::string report_to_json(const MetricsReport& report);
void write_report_json(const MetricsReport& report, const std::string& path);

void write_adaptations_csv(const std::vector<AdaptationRecord>& records,
                           const std::string& path);
std::vector<AdaptationRecord> read_adaptations_csv(const std::string& path);

std::vector<AdaptationRecord> collect_records(
    const std::vector<ReplicationResult>& runs);

}  // namespace sacre::harness
