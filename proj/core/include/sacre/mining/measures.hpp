#pragma once

#include <cstdint>

namespace sacre::mining {

struct EvalMeasures {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;

  bool operator==(const EvalMeasures&) const = default;
};

// Positive class = active. Empty denominators yield 0.
EvalMeasures confusion_measures(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn);

}  // namespace sacre::mining
