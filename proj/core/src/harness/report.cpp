#include "sacre/harness/report.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "sacre/harness/stats.hpp"
#include "sacre/reqmodel/text.hpp"

namespace sacre::harness {

namespace {

using nlohmann::json;

bool mined_kind(const std::string& kind) {
  return kind == "case1" || kind == "case3" || kind == "case4";
}

double mean_or(const std::vector<double>& xs, double fallback) {
  return xs.empty() ? fallback : mean(xs);
}

}  // namespace

std::vector<AdaptationRecord> collect_records(
    const std::vector<ReplicationResult>& runs) {
  std::vector<AdaptationRecord> records;
  for (const auto& run : runs)
    records.insert(records.end(), run.adaptations.begin(), run.adaptations.end());
  return records;
}

MetricsReport aggregate_records(const std::vector<AdaptationRecord>& records) {
  std::map<std::string, std::vector<const AdaptationRecord*>> by_scenario;
  for (const auto& r : records) by_scenario[r.scenario_id].push_back(&r);

  MetricsReport report;
  std::vector<double> all_rows, all_responses;
  for (const auto& [scenario, recs] : by_scenario) {
    ScenarioMetrics m;
    m.scenario_id = scenario;
    std::vector<double> responses, precisions, recalls, fs, agreements, case2;
    std::set<int> reps_seen;
    for (const auto* r : recs) {
      reps_seen.insert(r->replication);
      if (mined_kind(r->kind)) {
        ++m.mined_adaptations;
        responses.push_back(r->response_ms);
        all_rows.push_back(static_cast<double>(r->dataset_rows));
        all_responses.push_back(r->response_ms);
        if (r->precision >= 0.0) {
          precisions.push_back(r->precision);
          recalls.push_back(r->recall);
          fs.push_back(r->f_measure);
        }
        if (r->agreement >= 0.0) agreements.push_back(r->agreement);
      } else {
        ++m.case2_adaptations;
        case2.push_back(r->response_ms);
      }
    }
    if (!responses.empty()) {
      m.mean_response_ms = mean(responses);
      m.stddev_response_ms = sample_stddev(responses);
      m.degenerate = responses.size() < 2;
    } else {
      m.degenerate = true;
    }
    m.mean_precision = mean_or(precisions, -1.0);
    m.mean_recall = mean_or(recalls, -1.0);
    m.mean_f_measure = mean_or(fs, -1.0);
    m.mean_agreement = mean_or(agreements, -1.0);
    m.mean_case2_response_ms = mean_or(case2, -1.0);
    // Lower bound when rebuilt from a CSV; aggregate() overwrites it with the
    // authoritative count, which includes replications that never adapted.
    m.replications = static_cast<int>(reps_seen.size());
    m.adapted = static_cast<int>(reps_seen.size());
    report.scenarios.push_back(std::move(m));
  }

  if (all_rows.size() >= 2) {
    try {
      report.rows_response_ppmcc = ppmcc(all_rows, all_responses);
      report.has_ppmcc = true;
    } catch (const std::invalid_argument&) {
      report.has_ppmcc = false;
    }
  }
  return report;
}

MetricsReport aggregate(const std::vector<ReplicationResult>& runs) {
  auto report = aggregate_records(collect_records(runs));

  std::set<std::string> known;
  for (const auto& m : report.scenarios) known.insert(m.scenario_id);
  for (const auto& run : runs) {
    if (known.insert(run.scenario_id).second) {
      ScenarioMetrics empty;
      empty.scenario_id = run.scenario_id;
      empty.degenerate = true;
      report.scenarios.push_back(std::move(empty));
    }
  }
  std::map<std::string, ScenarioMetrics*> index;
  for (auto& m : report.scenarios) {
    m.replications = 0;
    m.adapted = 0;
    index[m.scenario_id] = &m;
  }
  for (const auto& run : runs) {
    auto& m = *index.at(run.scenario_id);
    ++m.replications;
    if (run.outcome == "adapted") ++m.adapted;
    if (run.outcome == "error") ++m.errors;
  }

  // Fold sensor recoveries (no ChangePlan) into the case-2 latency figure.
  std::map<std::string, std::vector<double>> case2;
  for (const auto& run : runs) {
    for (const auto& rec : run.adaptations)
      if (!mined_kind(rec.kind)) case2[run.scenario_id].push_back(rec.response_ms);
    for (const auto& rec : run.recoveries)
      case2[run.scenario_id].push_back(rec.response_ms);
  }
  for (auto& m : report.scenarios)
    if (auto it = case2.find(m.scenario_id); it != case2.end())
      m.mean_case2_response_ms = mean_or(it->second, -1.0);
  return report;
}

std::string report_to_json(const MetricsReport& report) {
  json j;
  j["scenarios"] = json::array();
  for (const auto& m : report.scenarios) {
    json s;
    s["scenario"] = m.scenario_id;
    s["replications"] = m.replications;
    s["adapted"] = m.adapted;
    s["errors"] = m.errors;
    s["minedAdaptations"] = m.mined_adaptations;
    s["meanResponseMs"] = m.mean_response_ms;
    s["stddevResponseMs"] = m.stddev_response_ms;
    s["degenerate"] = m.degenerate;
    s["meanPrecision"] = m.mean_precision;
    s["meanRecall"] = m.mean_recall;
    s["meanFMeasure"] = m.mean_f_measure;
    s["meanAgreement"] = m.mean_agreement;
    s["case2Adaptations"] = m.case2_adaptations;
    s["meanCase2ResponseMs"] = m.mean_case2_response_ms;
    j["scenarios"].push_back(std::move(s));
  }
  if (report.has_ppmcc) j["rowsResponsePpmcc"] = report.rows_response_ppmcc;
  return j.dump(2) + "\n";
}

void write_report_json(const MetricsReport& report, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << report_to_json(report);
}

void write_adaptations_csv(const std::vector<AdaptationRecord>& records,
                           const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << "scenario,replication,requirement,kind,responseMs,precision,recall,"
       "fMeasure,agreement,datasetRows,iteration,operationalization\n";
  for (const auto& r : records) {
    using reqmodel::format_number;
    f << r.scenario_id << ',' << r.replication << ',' << r.requirement_id << ','
      << r.kind << ',' << format_number(r.response_ms) << ','
      << format_number(r.precision) << ',' << format_number(r.recall) << ','
      << format_number(r.f_measure) << ',' << format_number(r.agreement) << ','
      << r.dataset_rows << ',' << r.iteration << ',' << r.operationalization << '\n';
  }
}

std::vector<AdaptationRecord> read_adaptations_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(f, line))
    throw std::runtime_error(path + ": empty adaptation log");
  std::vector<AdaptationRecord> records;
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    for (int i = 0; i < 11; ++i) {
      if (!std::getline(ss, cell, ','))
        throw std::runtime_error(path + ": truncated row");
      cells.push_back(cell);
    }
    std::string op;
    std::getline(ss, op);  // operationalization text is the unsplit remainder
    AdaptationRecord r;
    r.scenario_id = cells[0];
    r.replication = std::stoi(cells[1]);
    r.requirement_id = cells[2];
    r.kind = cells[3];
    r.response_ms = std::stod(cells[4]);
    r.precision = std::stod(cells[5]);
    r.recall = std::stod(cells[6]);
    r.f_measure = std::stod(cells[7]);
    r.agreement = std::stod(cells[8]);
    r.dataset_rows = static_cast<std::size_t>(std::stoull(cells[9]));
    r.iteration = std::stoll(cells[10]);
    r.operationalization = op;
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace sacre::harness
