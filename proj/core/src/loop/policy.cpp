#include "sacre/loop/policy.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "sacre/reqmodel/text.hpp"

namespace sacre::loop {
namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::map<std::string, std::string>& props,
                    const std::string& key) {
  auto it = props.find(key);
  if (it == props.end())
    throw std::invalid_argument("missing property '" + key + "'");
  return std::stod(it->second);
}

int parse_int(const std::map<std::string, std::string>& props, const std::string& key,
              int fallback) {
  auto it = props.find(key);
  if (it == props.end()) return fallback;
  return std::stoi(it->second);
}

const std::string& require(const std::map<std::string, std::string>& props,
                           const std::string& key) {
  auto it = props.find(key);
  if (it == props.end())
    throw std::invalid_argument("missing property '" + key + "'");
  return it->second;
}

reqmodel::CaseKind case_kind_from_name(const std::string& name) {
  if (name == "case1") return reqmodel::CaseKind::Case1;
  if (name == "case2a") return reqmodel::CaseKind::Case2a;
  if (name == "case2b") return reqmodel::CaseKind::Case2b;
  if (name == "case2c") return reqmodel::CaseKind::Case2c;
  if (name == "case3") return reqmodel::CaseKind::Case3;
  if (name == "case4") return reqmodel::CaseKind::Case4;
  throw std::invalid_argument("unknown uncertainty case '" + name + "'");
}

std::map<reqmodel::CaseKind, int> parse_case_map(
    const std::map<std::string, std::string>& props, const std::string& prefix) {
  std::map<reqmodel::CaseKind, int> out;
  for (const auto& [key, value] : props)
    if (key.rfind(prefix, 0) == 0)
      out[case_kind_from_name(key.substr(prefix.size()))] = std::stoi(value);
  return out;
}

void write_case_map(std::ofstream& f, const std::string& prefix,
                    const std::map<reqmodel::CaseKind, int>& m) {
  for (const auto& [kind, n] : m)
    f << prefix << reqmodel::case_name(kind) << "=" << n << "\n";
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ",";
    out += items[i];
  }
  return out;
}

}  // namespace

std::map<std::string, std::string> read_properties(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open properties file '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected key=value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

void PolicySet::validate() const {
  const std::pair<const char*, int> counts[] = {
      {"monitors", manager.structure.monitors},
      {"analyzers", manager.structure.analyzers},
      {"planners", manager.structure.planners},
      {"executors", manager.structure.executors},
      {"knowledgeBases", manager.structure.knowledge_bases}};
  for (const auto& [name, n] : counts)
    if (n < 1)
      throw std::invalid_argument(std::string("structure.") + name +
                                  " must be >= 1");
  if (monitor.variables.empty())
    throw std::invalid_argument("monitor policy declares no variables");
  std::set<std::string> known;
  for (const auto& v : monitor.variables)
    if (!known.insert(v.name).second)
      throw std::invalid_argument("duplicate monitored variable '" + v.name + "'");
  for (const auto& v : analyze.input_variables)
    if (!known.contains(v))
      throw std::invalid_argument("analyze input variable '" + v +
                                  "' is not monitored");
  for (const auto& v : knowledge_base.persist_variables)
    if (!known.contains(v))
      throw std::invalid_argument("persisted variable '" + v + "' is not monitored");
  auto in_unit = [](double x) { return 0.0 <= x && x <= 1.0; };
  if (!in_unit(plan.precision_min) || !in_unit(plan.recall_min) ||
      !in_unit(plan.fmeasure_min))
    throw std::invalid_argument("plan thresholds must lie in [0, 1]");
  if (execute.managed_elements.empty())
    throw std::invalid_argument("execute policy declares no managed element");
  if (!(knowledge_base.frequency > 0.0))
    throw std::invalid_argument("knowledge-base frequency must be positive");
  for (const auto& [kind, n] : knowledge_base.min_uncertainty_iterations)
    if (n < 0)
      throw std::invalid_argument("negative minUncertaintyIterations for " +
                                  reqmodel::case_name(kind));
  for (const auto& [kind, n] : analyze.min_analysis_iterations)
    if (n < 0)
      throw std::invalid_argument("negative minAnalysisIterations for " +
                                  reqmodel::case_name(kind));
}

PolicySet load_policy_set(const std::string& manager_path) {
  const auto dir = fs::path(manager_path).parent_path();
  const auto mgr = read_properties(manager_path);

  PolicySet ps;
  ps.manager.structure.monitors = parse_int(mgr, "structure.monitors", 1);
  ps.manager.structure.analyzers = parse_int(mgr, "structure.analyzers", 1);
  ps.manager.structure.planners = parse_int(mgr, "structure.planners", 1);
  ps.manager.structure.executors = parse_int(mgr, "structure.executors", 1);
  ps.manager.structure.knowledge_bases = parse_int(mgr, "structure.knowledgeBases", 1);

  auto role_file = [&](const std::string& role) {
    return read_properties((dir / require(mgr, "policy." + role)).string());
  };

  const auto mon = role_file("monitor");
  for (const auto& name : split_list(require(mon, "monitor.variables"))) {
    reqmodel::Preprocessing prep = reqmodel::Preprocessing::none();
    if (auto it = mon.find("monitor.preprocess." + name); it != mon.end()) {
      const std::string& v = it->second;
      if (v.rfind("perclosWindow:", 0) == 0)
        prep = reqmodel::Preprocessing::perclos_window(std::stoi(v.substr(14)));
      else
        throw std::invalid_argument("unknown preprocessing '" + v + "'");
    }
    ps.monitor.variables.emplace_back(
        name, parse_double(mon, "monitor.rawMin." + name),
        parse_double(mon, "monitor.rawMax." + name),
        parse_double(mon, "monitor.validMin." + name),
        parse_double(mon, "monitor.validMax." + name), prep);
  }

  const auto ana = role_file("analyze");
  ps.analyze.algorithm = require(ana, "analyze.algorithm");
  ps.analyze.input_variables = split_list(require(ana, "analyze.inputVariables"));
  ps.analyze.output_measures = split_list(require(ana, "analyze.outputMeasures"));
  ps.analyze.min_analysis_iterations =
      parse_case_map(ana, "analyze.minAnalysisIterations.");

  const auto pln = role_file("plan");
  ps.plan.precision_min = parse_double(pln, "plan.precisionMin");
  ps.plan.recall_min = parse_double(pln, "plan.recallMin");
  ps.plan.fmeasure_min = parse_double(pln, "plan.fMeasureMin");

  const auto exe = role_file("execute");
  ps.execute.managed_elements = split_list(require(exe, "execute.managedElements"));

  const auto kb = role_file("knowledgeBase");
  ps.knowledge_base.frequency = parse_double(kb, "kb.frequency");
  ps.knowledge_base.min_uncertainty_iterations =
      parse_case_map(kb, "kb.minUncertaintyIterations.");
  ps.knowledge_base.persist_variables = split_list(require(kb, "kb.persistVariables"));

  ps.validate();
  return ps;
}

void save_policy_set(const PolicySet& ps, const std::string& directory) {
  ps.validate();
  fs::create_directories(directory);
  const fs::path dir(directory);
  auto open = [&](const std::string& name) {
    std::ofstream f(dir / name);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    return f;
  };

  {
    auto f = open("manager.properties");
    f << "structure.monitors=" << ps.manager.structure.monitors << "\n"
      << "structure.analyzers=" << ps.manager.structure.analyzers << "\n"
      << "structure.planners=" << ps.manager.structure.planners << "\n"
      << "structure.executors=" << ps.manager.structure.executors << "\n"
      << "structure.knowledgeBases=" << ps.manager.structure.knowledge_bases << "\n"
      << "policy.monitor=monitor.properties\n"
      << "policy.analyze=analyze.properties\n"
      << "policy.plan=plan.properties\n"
      << "policy.execute=execute.properties\n"
      << "policy.knowledgeBase=knowledge_base.properties\n";
  }
  {
    auto f = open("monitor.properties");
    std::vector<std::string> names;
    for (const auto& v : ps.monitor.variables) names.push_back(v.name);
    f << "monitor.variables=" << join(names) << "\n";
    for (const auto& v : ps.monitor.variables) {
      f << "monitor.rawMin." << v.name << "=" << reqmodel::format_number(v.raw_min)
        << "\n"
        << "monitor.rawMax." << v.name << "=" << reqmodel::format_number(v.raw_max)
        << "\n"
        << "monitor.validMin." << v.name << "=" << reqmodel::format_number(v.valid_min)
        << "\n"
        << "monitor.validMax." << v.name << "=" << reqmodel::format_number(v.valid_max)
        << "\n";
      if (v.preprocessing.kind == reqmodel::Preprocessing::Kind::PerclosWindow)
        f << "monitor.preprocess." << v.name << "=perclosWindow:"
          << v.preprocessing.window_ticks << "\n";
    }
  }
  {
    auto f = open("analyze.properties");
    f << "analyze.algorithm=" << ps.analyze.algorithm << "\n"
      << "analyze.inputVariables=" << join(ps.analyze.input_variables) << "\n"
      << "analyze.outputMeasures=" << join(ps.analyze.output_measures) << "\n";
    write_case_map(f, "analyze.minAnalysisIterations.",
                   ps.analyze.min_analysis_iterations);
  }
  {
    auto f = open("plan.properties");
    f << "plan.precisionMin=" << reqmodel::format_number(ps.plan.precision_min) << "\n"
      << "plan.recallMin=" << reqmodel::format_number(ps.plan.recall_min) << "\n"
      << "plan.fMeasureMin=" << reqmodel::format_number(ps.plan.fmeasure_min) << "\n";
  }
  {
    auto f = open("execute.properties");
    f << "execute.managedElements=" << join(ps.execute.managed_elements) << "\n";
  }
  {
    auto f = open("knowledge_base.properties");
    f << "kb.frequency=" << reqmodel::format_number(ps.knowledge_base.frequency)
      << "\n";
    write_case_map(f, "kb.minUncertaintyIterations.",
                   ps.knowledge_base.min_uncertainty_iterations);
    f << "kb.persistVariables=" << join(ps.knowledge_base.persist_variables) << "\n";
  }
}

}  // namespace sacre::loop
