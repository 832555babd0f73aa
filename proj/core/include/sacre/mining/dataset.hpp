#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace sacre::mining {

// Dataset cell: numeric value or nominal label.
using Cell = std::variant<double, std::string>;

struct Attribute {
  enum class Kind { Numeric, Nominal };
  std::string name;
  Kind kind = Kind::Numeric;
  std::vector<std::string> values;  // nominal only

  static Attribute numeric(std::string name) {
    return {std::move(name), Kind::Numeric, {}};
  }
  static Attribute nominal(std::string name, std::vector<std::string> values) {
    return {std::move(name), Kind::Nominal, std::move(values)};
  }

  bool operator==(const Attribute&) const = default;
};

inline const std::string kClassActive = "active";
inline const std::string kClassInactive = "inactive";

// Tabular learning input. The last attribute is the class: nominal with
// exactly the values {active, inactive}.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::string relation_name, std::vector<Attribute> attributes);

  void append(std::vector<Cell> row);

  const std::string& relation_name() const { return relation_name_; }
  const std::vector<Attribute>& attributes() const { return attributes_; }
  const std::vector<std::vector<Cell>>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  // Index of the class attribute (always the last one).
  std::size_t class_index() const { return attributes_.size() - 1; }
  bool row_is_active(std::size_t row) const {
    return std::get<std::string>(records_[row][class_index()]) == kClassActive;
  }
  std::size_t count_active() const;

  bool operator==(const Dataset&) const = default;

 private:
  std::string relation_name_;
  std::vector<Attribute> attributes_;
  std::vector<std::vector<Cell>> records_;
};

}  // namespace sacre::mining
