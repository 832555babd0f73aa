#include "sacre/sim/trace.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "sacre/reqmodel/text.hpp"

namespace sacre::sim {

namespace {

const std::set<std::string> kActuators = {"seat_vibration", "sound_light",
                                          "lane_keeping"};
const std::set<std::string> kActions = {"turn_on", "turn_off", "disable", "enable"};

std::string field(const std::optional<double>& v) {
  return v ? reqmodel::format_number(*v) : std::string();
}

std::optional<double> parse_field(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::stod(s);
}

std::vector<std::string> split_csv_line(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void validate_trace(const std::vector<SensorTraceRow>& rows) {
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].tick != static_cast<std::int64_t>(i))
      throw TraceError("trace ticks must be contiguous from 0; row " +
                       std::to_string(i) + " has tick " +
                       std::to_string(rows[i].tick));
}

void validate_actions(const std::vector<DriverAction>& actions) {
  std::int64_t last = -1;
  for (const auto& a : actions) {
    if (a.tick < last) throw TraceError("driver actions must be tick-sorted");
    last = a.tick;
    if (!kActuators.contains(a.actuator_id))
      throw TraceError("unknown actuator '" + a.actuator_id + "'");
    if (!kActions.contains(a.action))
      throw TraceError("unknown driver action '" + a.action + "'");
    if ((a.action == "turn_on" || a.action == "turn_off") &&
        a.actuator_id != "lane_keeping")
      throw TraceError("only lane_keeping supports " + a.action);
  }
}

void write_trace_csv(const std::vector<SensorTraceRow>& rows,
                     const std::string& path) {
  validate_trace(rows);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw TraceError("cannot write '" + path + "'");
  f << "tick,eyesState,facePosition,hbpm,hosw\n";
  for (const auto& r : rows)
    f << r.tick << ',' << field(r.eyes_state) << ',' << field(r.face_position) << ','
      << field(r.hbpm) << ',' << field(r.hosw) << '\n';
}

std::vector<SensorTraceRow> read_trace_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw TraceError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(f, line) ||
      split_csv_line(line) !=
          std::vector<std::string>{"tick", "eyesState", "facePosition", "hbpm",
                                   "hosw"})
    throw TraceError(path + ": bad trace header");
  std::vector<SensorTraceRow> rows;
  while (std::getline(f, line)) {
    auto cells = split_csv_line(line);
    if (cells.size() != 5)
      throw TraceError(path + ": expected 5 fields, got " +
                       std::to_string(cells.size()));
    SensorTraceRow r;
    r.tick = std::stoll(cells[0]);
    r.eyes_state = parse_field(cells[1]);
    r.face_position = parse_field(cells[2]);
    r.hbpm = parse_field(cells[3]);
    r.hosw = parse_field(cells[4]);
    rows.push_back(r);
  }
  validate_trace(rows);
  return rows;
}

void write_actions_csv(const std::vector<DriverAction>& actions,
                       const std::string& path) {
  validate_actions(actions);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw TraceError("cannot write '" + path + "'");
  f << "tick,actuator,action\n";
  for (const auto& a : actions)
    f << a.tick << ',' << a.actuator_id << ',' << a.action << '\n';
}

std::vector<DriverAction> read_actions_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw TraceError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(f, line) ||
      split_csv_line(line) != std::vector<std::string>{"tick", "actuator", "action"})
    throw TraceError(path + ": bad actions header");
  std::vector<DriverAction> actions;
  while (std::getline(f, line)) {
    auto cells = split_csv_line(line);
    if (cells.size() != 3)
      throw TraceError(path + ": expected 3 fields, got " +
                       std::to_string(cells.size()));
    actions.push_back({std::stoll(cells[0]), cells[1], cells[2]});
  }
  validate_actions(actions);
  return actions;
}

}  // namespace sacre::sim
