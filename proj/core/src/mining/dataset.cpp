#include "sacre/mining/dataset.hpp"

namespace sacre::mining {

Dataset::Dataset(std::string relation_name, std::vector<Attribute> attributes)
    : relation_name_(std::move(relation_name)), attributes_(std::move(attributes)) {
  if (attributes_.empty())
    throw std::invalid_argument("dataset needs at least the class attribute");
  const Attribute& cls = attributes_.back();
  if (cls.kind != Attribute::Kind::Nominal || cls.values.size() != 2 ||
      cls.values[0] != kClassActive || cls.values[1] != kClassInactive)
    throw std::invalid_argument(
        "class attribute must be last, nominal, with values {active,inactive}");
}

void Dataset::append(std::vector<Cell> row) {
  if (row.size() != attributes_.size())
    throw std::invalid_argument("row arity does not match attribute count");
  for (std::size_t i = 0; i < row.size(); ++i) {
    const bool numeric = std::holds_alternative<double>(row[i]);
    if (numeric != (attributes_[i].kind == Attribute::Kind::Numeric))
      throw std::invalid_argument("cell type mismatch for attribute '" +
                                  attributes_[i].name + "'");
    if (!numeric) {
      const auto& v = std::get<std::string>(row[i]);
      const auto& allowed = attributes_[i].values;
      bool found = false;
      for (const auto& a : allowed)
        if (a == v) { found = true; break; }
      if (!found)
        throw std::invalid_argument("value '" + v + "' not declared for attribute '" +
                                    attributes_[i].name + "'");
    }
  }
  records_.push_back(std::move(row));
}

std::size_t Dataset::count_active() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < records_.size(); ++i)
    if (row_is_active(i)) ++n;
  return n;
}

}  // namespace sacre::mining
