#include "sacre/mining/arff.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "sacre/reqmodel/text.hpp"

namespace sacre::mining {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(s.substr(start));
      break;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.compare(0, prefix.size(), prefix) == 0;
}

}  // namespace

void arff_write(const Dataset& ds, std::ostream& out) {
  out << "@relation " << ds.relation_name() << "\n";
  for (const auto& attr : ds.attributes()) {
    out << "@attribute " << attr.name << ' ';
    if (attr.kind == Attribute::Kind::Numeric) {
      out << "numeric";
    } else {
      out << '{';
      for (std::size_t i = 0; i < attr.values.size(); ++i) {
        if (i) out << ',';
        out << attr.values[i];
      }
      out << '}';
    }
    out << "\n";
  }
  out << "@data\n";
  for (const auto& row : ds.records()) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      if (const auto* d = std::get_if<double>(&row[i]))
        out << reqmodel::format_number(*d);
      else
        out << std::get<std::string>(row[i]);
    }
    out << "\n";
  }
}

void arff_write_file(const Dataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  arff_write(ds, out);
}

Dataset arff_read(std::istream& in) {
  std::string line;
  int lineno = 0;

  std::string relation;
  std::vector<Attribute> attributes;
  bool in_data = false;
  Dataset ds;

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '%') continue;

    if (!in_data) {
      if (starts_with(line, "@relation ")) {
        relation = line.substr(10);
      } else if (starts_with(line, "@attribute ")) {
        std::string rest = line.substr(11);
        std::size_t sp = rest.find(' ');
        if (sp == std::string::npos)
          throw ArffHeaderError(lineno, "malformed @attribute line");
        std::string name = rest.substr(0, sp);
        std::string kind = rest.substr(sp + 1);
        if (kind == "numeric") {
          attributes.push_back(Attribute::numeric(name));
        } else if (kind.size() >= 2 && kind.front() == '{' && kind.back() == '}') {
          auto values = split(kind.substr(1, kind.size() - 2), ',');
          attributes.push_back(Attribute::nominal(name, values));
        } else {
          throw ArffAttributeKindError(lineno, "unknown attribute kind '" + kind + "'");
        }
      } else if (line == "@data") {
        if (relation.empty())
          throw ArffHeaderError(lineno, "@data before @relation");
        try {
          ds = Dataset(relation, attributes);
        } catch (const std::invalid_argument& e) {
          throw ArffHeaderError(lineno, e.what());
        }
        in_data = true;
      } else {
        throw ArffHeaderError(lineno, "unexpected header line");
      }
      continue;
    }

    auto fields = split(line, ',');
    if (fields.size() != attributes.size())
      throw ArffArityError(lineno, "row has " + std::to_string(fields.size()) +
                                       " values, expected " +
                                       std::to_string(attributes.size()));
    std::vector<Cell> row;
    row.reserve(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (attributes[i].kind == Attribute::Kind::Numeric) {
        double v = 0.0;
        auto res = std::from_chars(fields[i].data(), fields[i].data() + fields[i].size(), v);
        if (res.ec != std::errc{} || res.ptr != fields[i].data() + fields[i].size())
          throw ArffArityError(lineno, "bad numeric value '" + fields[i] + "'");
        row.emplace_back(v);
      } else {
        row.emplace_back(fields[i]);
      }
    }
    try {
      ds.append(std::move(row));
    } catch (const std::invalid_argument& e) {
      throw ArffArityError(lineno, e.what());
    }
  }
  if (!in_data) throw ArffHeaderError(lineno, "missing @data section");
  return ds;
}

Dataset arff_read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return arff_read(in);
}

}  // namespace sacre::mining
