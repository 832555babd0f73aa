#pragma once

#include <map>
#include <string>

#include "sacre/reqmodel/types.hpp"

namespace sacre::reqmodel {

// Bidirectional variable-name aliasing for the textual operationalization
// form, e.g. heartBeatsPerMinute <-> hbpm. Canonical names are what snapshots
// and datasets use; display names are what the text grammar shows.
class AliasMap {
 public:
  AliasMap() = default;

  void add(const std::string& canonical, const std::string& display);

  // Returns the input unchanged when no alias is registered.
  const std::string& to_canonical(const std::string& ident) const;
  const std::string& to_display(const std::string& canonical) const;

 private:
  std::map<std::string, std::string> display_to_canonical_;
  std::map<std::string, std::string> canonical_to_display_;
};

struct OperationalizationParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Grammar: expr := clause (" OR " clause)*; clause := cond (" AND " cond)*;
// cond := ident op number; op in {">=", "<=", ">", "<", "="}. '.' decimal
// separator, shortest round-trip number formatting on output.
std::string format_operationalization(const Operationalization& op,
                                      const AliasMap& aliases = {});
Operationalization parse_operationalization(const std::string& text,
                                            const AliasMap& aliases = {});

std::string format_number(double v);

}  // namespace sacre::reqmodel
